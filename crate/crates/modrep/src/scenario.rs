//! Scenario files: an INI-style description of a field, a group built from
//! cyclic and elementary abelian pieces (optionally twisted into a
//! semidirect product with a cyclic group), a rank-variety line, the checks
//! to run, and the expected outcomes. Builtin scenarios cover the worked
//! examples shipped with the tool.

use crate::error::{Error, Result};
use crate::ffla::{Field, Scalar};
use crate::groups::{ElementaryAbelian, Group};
use crate::rep::covers::AlgebraCtx;
use crate::varieties::Line;

/// A group built from named constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupExpr {
    Cyclic(usize),
    Elementary(u32, u32),
    Product(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupExpr::Cyclic(n) => Group::cyclic(*n),
            GroupExpr::Elementary(p, r) => Group::elementary_abelian(*p, *r),
            GroupExpr::Product(a, b) => Group::direct_product(&a.build()?, &b.build()?),
        }
    }
}

/// One factor `gK^e` of a generator word.
pub type Word = Vec<(usize, u32)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Blocks,
    Simples,
    ExtBlocks,
    LemmaSuite,
    Benson,
    Correspondence,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Blocks => "blocks",
            Check::Simples => "simples",
            Check::ExtBlocks => "ext_blocks",
            Check::LemmaSuite => "lemma_suite",
            Check::Benson => "benson",
            Check::Correspondence => "correspondence",
        }
    }

    fn parse(tok: &str, line: usize) -> Result<Check> {
        match tok {
            "blocks" => Ok(Check::Blocks),
            "simples" => Ok(Check::Simples),
            "ext_blocks" => Ok(Check::ExtBlocks),
            "lemma_suite" => Ok(Check::LemmaSuite),
            "benson" => Ok(Check::Benson),
            "correspondence" => Ok(Check::Correspondence),
            _ => Err(Error::Parse {
                line,
                msg: format!("unknown check '{tok}'"),
            }),
        }
    }
}

/// Expected outcomes; absent entries are not checked.
#[derive(Debug, Clone, Default)]
pub struct Expectations {
    pub kg_blocks: Option<usize>,
    pub kh_blocks: Option<usize>,
    pub simple_count: Option<usize>,
    /// ext-block class counts per ordinary block, in block order
    pub ext_classes: Option<Vec<usize>>,
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub p: u32,
    pub n: u32,
    pub base: GroupExpr,
    /// images of the base generators under the twisting automorphism
    pub action: Option<Vec<Word>>,
    /// order of the cyclic group acting through the automorphism
    pub sd_order: Option<usize>,
    /// positions (into the group generator list) of the basis of E
    pub line_basis: Vec<usize>,
    /// scalar tokens for the line coordinates
    pub alpha: Vec<String>,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub window: Option<usize>,
    pub retries: usize,
    pub expect: Expectations,
}

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

impl Scenario {
    pub fn field(&self) -> Result<Field> {
        Field::new(self.p, self.n)
    }

    /// Builds the group: the base, twisted into a semidirect product when an
    /// action is present.
    pub fn group(&self) -> Result<Group> {
        let base = self.base.build()?;
        match (&self.action, self.sd_order) {
            (Some(words), Some(m)) => {
                let perm = automorphism_perm(&base, words)?;
                Group::semidirect_cyclic(&base, &perm, m)
            }
            (None, None) => Ok(base),
            _ => Err(Error::Invariant(
                "an action needs an order and vice versa".into(),
            )),
        }
    }

    /// The elementary abelian subgroup E spanned by the named generators.
    pub fn elementary(&self, group: &Group) -> Result<ElementaryAbelian> {
        let gens = group.generators();
        let basis: Vec<usize> = self
            .line_basis
            .iter()
            .map(|&i| {
                gens.get(i)
                    .copied()
                    .ok_or_else(|| Error::Invariant(format!("no generator g{}", i + 1)))
            })
            .collect::<Result<_>>()?;
        ElementaryAbelian::new(group, &basis, self.p)
    }

    pub fn line(&self, field: &Field) -> Result<Line> {
        let coords: Vec<Scalar> = self
            .alpha
            .iter()
            .map(|tok| {
                let tok = if tok == "g" { "g^1" } else { tok.as_str() };
                field
                    .parse_scalar(tok)
                    .ok_or_else(|| Error::Invariant(format!("bad scalar token '{tok}'")))
            })
            .collect::<Result<_>>()?;
        Line::new(field, coords)
    }
}

/// Extends generator images to the full permutation of the base group by
/// following the BFS words.
pub fn automorphism_perm(base: &Group, images: &[Word]) -> Result<Vec<usize>> {
    let gens = base.generators();
    if images.len() != gens.len() {
        return Err(Error::Invariant(format!(
            "{} generator images for {} generators",
            images.len(),
            gens.len()
        )));
    }
    let img_of_gen: Vec<usize> = images
        .iter()
        .map(|word| {
            let mut x = 0usize;
            for &(gi, e) in word {
                let &g = gens
                    .get(gi)
                    .ok_or_else(|| Error::Invariant(format!("no generator g{}", gi + 1)))?;
                for _ in 0..e {
                    x = base.mul(x, g);
                }
            }
            Ok(x)
        })
        .collect::<Result<_>>()?;
    Ok((0..base.order())
        .map(|a| {
            let mut x = 0usize;
            for &gi in base.word(a) {
                x = base.mul(x, img_of_gen[gi]);
            }
            x
        })
        .collect())
}

// ---- parsing ---------------------------------------------------------------

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Parses a group constructor expression: `cyclic(n)`, `elementary(p, r)`,
/// `product(a, b)`.
fn parse_group_expr(s: &str, line: usize) -> Result<GroupExpr> {
    fn inner(s: &str, line: usize) -> Result<GroupExpr> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or(Error::Parse {
                line,
                msg: format!("expected a constructor call, got '{s}'"),
            })?;
        if !s.ends_with(')') {
            return parse_err(line, format!("unbalanced parentheses in '{s}'"));
        }
        let head = s[..open].trim();
        let body = &s[open + 1..s.len() - 1];
        // split body at top-level commas
        let mut args: Vec<&str> = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, c) in body.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or(Error::Parse {
                            line,
                            msg: format!("unbalanced parentheses in '{s}'"),
                        })?
                }
                ',' if depth == 0 => {
                    args.push(&body[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        args.push(&body[start..]);
        let nums = |k: usize| -> Result<Vec<u64>> {
            if args.len() != k {
                return parse_err(line, format!("'{head}' takes {k} arguments"));
            }
            args.iter()
                .map(|a| {
                    a.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse {
                            line,
                            msg: format!("expected a number, got '{}'", a.trim()),
                        })
                })
                .collect()
        };
        match head {
            "cyclic" => {
                let v = nums(1)?;
                Ok(GroupExpr::Cyclic(v[0] as usize))
            }
            "elementary" => {
                let v = nums(2)?;
                Ok(GroupExpr::Elementary(v[0] as u32, v[1] as u32))
            }
            "product" => {
                if args.len() != 2 {
                    return parse_err(line, "'product' takes 2 arguments");
                }
                Ok(GroupExpr::Product(
                    Box::new(inner(args[0], line)?),
                    Box::new(inner(args[1], line)?),
                ))
            }
            _ => parse_err(line, format!("unknown constructor '{head}'")),
        }
    }
    inner(s, line)
}

/// Parses `g2` or `g3^2` into (generator index, exponent).
fn parse_factor(tok: &str, line: usize) -> Result<(usize, u32)> {
    let tok = tok.trim();
    let rest = tok
        .strip_prefix('g')
        .ok_or(Error::Parse {
            line,
            msg: format!("expected a generator like g1, got '{tok}'"),
        })?;
    let (idx, exp) = match rest.split_once('^') {
        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| Error::Parse {
            line,
            msg: format!("bad exponent in '{tok}'"),
        })?),
        None => (rest, 1),
    };
    let k: usize = idx.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad generator index in '{tok}'"),
    })?;
    if k == 0 {
        return parse_err(line, "generators are numbered from g1");
    }
    Ok((k - 1, exp))
}

/// Parses `g1 -> g1^2; g2 -> g3; g3 -> g2*g3`.
fn parse_action(s: &str, line: usize) -> Result<Vec<Word>> {
    let mut out: Vec<(usize, Word)> = Vec::new();
    for rule in s.split(';') {
        let rule = rule.trim();
        if rule.is_empty() {
            continue;
        }
        let (lhs, rhs) = rule.split_once("->").ok_or(Error::Parse {
            line,
            msg: format!("expected 'gK -> word' in '{rule}'"),
        })?;
        let (gi, e) = parse_factor(lhs, line)?;
        if e != 1 {
            return parse_err(line, "the left side of a rule is a bare generator");
        }
        let word = rhs
            .split('*')
            .map(|f| parse_factor(f, line))
            .collect::<Result<Word>>()?;
        out.push((gi, word));
    }
    out.sort_by_key(|&(gi, _)| gi);
    for (pos, &(gi, _)) in out.iter().enumerate() {
        if gi != pos {
            return parse_err(line, "rules must cover g1..gK exactly once each");
        }
    }
    Ok(out.into_iter().map(|(_, w)| w).collect())
}

/// Parses the INI-style scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut section = String::new();
    let mut name = String::from("unnamed");
    let mut p: Option<u32> = None;
    let mut n: Option<u32> = None;
    let mut base: Option<GroupExpr> = None;
    let mut action: Option<Vec<Word>> = None;
    let mut sd_order: Option<usize> = None;
    let mut line_basis: Vec<usize> = Vec::new();
    let mut alpha: Vec<String> = Vec::new();
    let mut checks: Vec<Check> = Vec::new();
    let mut seed = DEFAULT_SEED;
    let mut window: Option<usize> = None;
    let mut retries = 2usize;
    let mut expect = Expectations::default();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(sec) = trimmed.strip_prefix('[') {
            let sec = sec.strip_suffix(']').ok_or(Error::Parse {
                line: ln,
                msg: "unterminated section header".into(),
            })?;
            section = sec.trim().to_string();
            match section.as_str() {
                "scenario" | "field" | "group" | "line" | "checks" | "options" | "expect" => {}
                other => return parse_err(ln, format!("unknown section '{other}'")),
            }
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or(Error::Parse {
            line: ln,
            msg: format!("expected 'key = value', got '{trimmed}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| -> Result<u64> {
            v.parse::<u64>().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("expected a number, got '{v}'"),
            })
        };
        match (section.as_str(), key) {
            ("scenario", "name") => name = value.to_string(),
            ("field", "p") => p = Some(num(value)? as u32),
            ("field", "n") => n = Some(num(value)? as u32),
            ("group", "base") => base = Some(parse_group_expr(value, ln)?),
            ("group", "action") => action = Some(parse_action(value, ln)?),
            ("group", "order") => sd_order = Some(num(value)? as usize),
            ("line", "basis") => {
                line_basis = value
                    .split(',')
                    .map(|t| parse_factor(t, ln).and_then(|(g, e)| {
                        if e == 1 {
                            Ok(g)
                        } else {
                            parse_err(ln, "the basis lists bare generators")
                        }
                    }))
                    .collect::<Result<_>>()?
            }
            ("line", "alpha") => {
                alpha = value.split(',').map(|t| t.trim().to_string()).collect()
            }
            ("checks", "run") => {
                checks = value
                    .split(',')
                    .map(|t| Check::parse(t.trim(), ln))
                    .collect::<Result<_>>()?
            }
            ("options", "seed") => seed = num(value)?,
            ("options", "window") => window = Some(num(value)? as usize),
            ("options", "retries") => retries = num(value)? as usize,
            ("expect", "kg_blocks") => expect.kg_blocks = Some(num(value)? as usize),
            ("expect", "kh_blocks") => expect.kh_blocks = Some(num(value)? as usize),
            ("expect", "simple_count") => expect.simple_count = Some(num(value)? as usize),
            ("expect", "ext_classes") => {
                expect.ext_classes = Some(
                    value
                        .split(',')
                        .map(|t| num(t.trim()).map(|v| v as usize))
                        .collect::<Result<_>>()?,
                )
            }
            ("expect", "agreement") => {
                expect.agreement = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return parse_err(ln, format!("expected true/false, got '{value}'")),
                })
            }
            (sec, key) => {
                return parse_err(ln, format!("unknown key '{key}' in section '{sec}'"))
            }
        }
    }
    let p = p.ok_or(Error::Parse {
        line: 0,
        msg: "missing field.p".into(),
    })?;
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing field.n".into(),
    })?;
    let base = base.ok_or(Error::Parse {
        line: 0,
        msg: "missing group.base".into(),
    })?;
    if line_basis.len() != alpha.len() {
        return parse_err(0, "alpha length differs from the size of the line basis");
    }
    Ok(Scenario {
        name,
        p,
        n,
        base,
        action,
        sd_order,
        line_basis,
        alpha,
        checks,
        seed,
        window,
        retries,
        expect,
    })
}

pub fn load_scenario(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

// ---- builtins --------------------------------------------------------------

pub const BUILTIN_NAMES: &[&str] = &["g84-unstable", "g84-stable", "p3", "p5", "s3-sanity"];

/// The worked example scenarios shipped with the tool.
pub fn builtin(name: &str) -> Result<Scenario> {
    let g84 = || {
        (
            GroupExpr::Product(
                Box::new(GroupExpr::Cyclic(7)),
                Box::new(GroupExpr::Elementary(2, 2)),
            ),
            // z g z⁻¹ = g², z x z⁻¹ = y, z y z⁻¹ = x y
            Some(vec![
                vec![(0, 2)],
                vec![(2, 1)],
                vec![(1, 1), (2, 1)],
            ]),
            Some(3),
        )
    };
    let sc = match name {
        "g84-unstable" => {
            let (base, action, sd_order) = g84();
            Scenario {
                name: name.into(),
                p: 2,
                n: 3,
                base,
                action,
                sd_order,
                line_basis: vec![1, 2],
                alpha: vec!["1".into(), "g^1".into()],
                checks: vec![
                    Check::Blocks,
                    Check::Simples,
                    Check::ExtBlocks,
                    Check::Benson,
                    Check::Correspondence,
                ],
                seed: DEFAULT_SEED,
                window: None,
                retries: 2,
                expect: Expectations {
                    kg_blocks: Some(3),
                    kh_blocks: Some(7),
                    // over GF(8) the two nontrivial cube characters fuse
                    // into one 2-dimensional principal-block simple
                    simple_count: Some(4),
                    ext_classes: Some(vec![1, 3, 3]),
                    agreement: Some(true),
                },
            }
        }
        "g84-stable" => {
            let (base, action, sd_order) = g84();
            Scenario {
                name: name.into(),
                p: 2,
                n: 6,
                base,
                action,
                sd_order,
                line_basis: vec![1, 2],
                // ω = g^21 is a primitive cube root of unity in GF(64)
                alpha: vec!["1".into(), "g^21".into()],
                checks: vec![
                    Check::Blocks,
                    Check::ExtBlocks,
                    Check::Benson,
                    Check::LemmaSuite,
                    Check::Correspondence,
                ],
                seed: DEFAULT_SEED,
                window: None,
                retries: 2,
                expect: Expectations {
                    kg_blocks: Some(3),
                    kh_blocks: Some(3),
                    simple_count: None,
                    ext_classes: Some(vec![1, 1, 1]),
                    agreement: Some(true),
                },
            }
        }
        "p3" => Scenario {
            name: name.into(),
            p: 3,
            n: 4,
            base: GroupExpr::Product(
                Box::new(GroupExpr::Cyclic(5)),
                Box::new(GroupExpr::Elementary(3, 2)),
            ),
            // the involution inverts C₅ and the first C₃, fixes the second
            action: Some(vec![vec![(0, 4)], vec![(1, 2)], vec![(2, 1)]]),
            sd_order: Some(2),
            line_basis: vec![1, 2],
            alpha: vec!["1".into(), "g^1".into()],
            checks: vec![
                Check::Blocks,
                Check::ExtBlocks,
                Check::Benson,
                Check::Correspondence,
            ],
            seed: DEFAULT_SEED,
            window: None,
            retries: 2,
            expect: Expectations {
                kg_blocks: Some(3),
                kh_blocks: Some(5),
                simple_count: None,
                ext_classes: Some(vec![1, 2, 2]),
                agreement: Some(true),
            },
        },
        "p5" => Scenario {
            name: name.into(),
            p: 5,
            n: 2,
            base: GroupExpr::Product(
                Box::new(GroupExpr::Cyclic(3)),
                Box::new(GroupExpr::Elementary(5, 2)),
            ),
            action: Some(vec![vec![(0, 2)], vec![(1, 4)], vec![(2, 1)]]),
            sd_order: Some(2),
            line_basis: vec![1, 2],
            alpha: vec!["1".into(), "g^1".into()],
            checks: vec![
                Check::Blocks,
                Check::ExtBlocks,
                Check::Benson,
                Check::Correspondence,
            ],
            seed: DEFAULT_SEED,
            window: None,
            retries: 2,
            expect: Expectations {
                kg_blocks: Some(2),
                kh_blocks: Some(3),
                simple_count: None,
                ext_classes: Some(vec![1, 2]),
                agreement: Some(true),
            },
        },
        "s3-sanity" => Scenario {
            name: name.into(),
            p: 3,
            n: 1,
            base: GroupExpr::Cyclic(3),
            action: Some(vec![vec![(0, 2)]]),
            sd_order: Some(2),
            line_basis: vec![0],
            alpha: vec!["1".into()],
            checks: vec![
                Check::Blocks,
                Check::Simples,
                Check::ExtBlocks,
                Check::Benson,
                Check::LemmaSuite,
                Check::Correspondence,
            ],
            seed: DEFAULT_SEED,
            window: None,
            retries: 2,
            expect: Expectations {
                kg_blocks: Some(1),
                kh_blocks: Some(1),
                simple_count: Some(2),
                ext_classes: Some(vec![1]),
                agreement: Some(true),
            },
        },
        _ => return Err(Error::UnknownBuiltin(name.into())),
    };
    Ok(sc)
}

/// Smallest n for which GF(p^n) splits every simple kG-module.
pub fn suggest_field(sc: &Scenario) -> Result<(u32, u32)> {
    let group = sc.group()?;
    for n in 1..=12u32 {
        let field = match Field::new(sc.p, n) {
            Ok(f) => f,
            Err(_) => break,
        };
        let ctx = AlgebraCtx::new(group.clone(), field, sc.seed);
        match ctx.require_split() {
            Ok(()) => return Ok((sc.p, n)),
            Err(Error::NonSplitField { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Invariant(format!(
        "no splitting field GF({}^n) with n <= 12 found",
        sc.p
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[scenario]
name = demo

[field]
p = 2
n = 3

[group]
base = product(cyclic(7), elementary(2, 2))
action = g1 -> g1^2; g2 -> g3; g3 -> g2*g3
order = 3

[line]
basis = g2, g3
alpha = 1, g^1

[checks]
run = blocks, ext_blocks

[options]
seed = 7
window = 8

[expect]
kg_blocks = 3
ext_classes = 1, 3, 3
agreement = true
"#;

    #[test]
    fn parses_the_sample() {
        let sc = parse_scenario(SAMPLE).unwrap();
        assert_eq!(sc.name, "demo");
        assert_eq!((sc.p, sc.n), (2, 3));
        assert_eq!(sc.checks, vec![Check::Blocks, Check::ExtBlocks]);
        assert_eq!(sc.seed, 7);
        assert_eq!(sc.window, Some(8));
        assert_eq!(sc.expect.kg_blocks, Some(3));
        assert_eq!(sc.expect.ext_classes, Some(vec![1, 3, 3]));
        let g = sc.group().unwrap();
        assert_eq!(g.order(), 84);
        let f = sc.field().unwrap();
        let e = sc.elementary(&g).unwrap();
        assert_eq!(e.rank(), 2);
        let line = sc.line(&f).unwrap();
        assert_eq!(line.coords(), &[1, f.generator()]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "[field]\npx 2\n";
        match parse_scenario(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let bad2 = "[field]\np = 2\nn = 1\n[group]\nbase = frobnicate(3)\n";
        assert!(matches!(
            parse_scenario(bad2),
            Err(Error::Parse { line: 5, .. })
        ));
    }

    #[test]
    fn builtin_groups_build() {
        for name in BUILTIN_NAMES {
            let sc = builtin(name).unwrap();
            let g = sc.group().unwrap();
            let expected = match *name {
                "g84-unstable" | "g84-stable" => 84,
                "p3" => 90,
                "p5" => 150,
                "s3-sanity" => 6,
                _ => unreachable!(),
            };
            assert_eq!(g.order(), expected, "order of {name}");
            let f = sc.field().unwrap();
            let e = sc.elementary(&g).unwrap();
            assert_eq!(e.rank() as usize, sc.alpha.len());
            sc.line(&f).unwrap();
        }
        assert!(matches!(
            builtin("nope"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn g84_builtin_matches_handwritten_construction() {
        let sc = builtin("g84-unstable").unwrap();
        let g = sc.group().unwrap();
        // z acts with order 3, the Sylow subgroups have the right sizes
        assert_eq!(g.sylow_subgroup(2).unwrap().order(), 4);
        assert_eq!(g.sylow_subgroup(7).unwrap().order(), 7);
        assert_eq!(g.sylow_subgroup(3).unwrap().order(), 3);
    }

    #[test]
    fn suggest_field_for_c3_in_char_2() {
        // kC₃ over GF(2) has a 2-dimensional simple with End = GF(4);
        // GF(4) splits it into two characters
        let mut sc = builtin("s3-sanity").unwrap();
        sc.p = 2;
        sc.action = None;
        sc.sd_order = None;
        let (p, n) = suggest_field(&sc).unwrap();
        assert_eq!((p, n), (2, 2));
    }

    #[test]
    fn suggest_field_for_s3_in_char_2() {
        // S₃ ≅ GL(2, 2), so the prime field already splits it
        let mut sc = builtin("s3-sanity").unwrap();
        sc.p = 2;
        let (p, n) = suggest_field(&sc).unwrap();
        assert_eq!((p, n), (2, 1));
    }
}
