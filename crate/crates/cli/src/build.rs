//! Turns a parsed definition file into core objects, resolving names and
//! checking algebraic invariants with source locations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use sesq_core::intlin::matrix::unit_vector;
use sesq_core::intlin::ZAlgebra;
use sesq_core::intlin::{FgModule, IntMatrix, Vector};
use sesq_core::scheme::{CongruenceScheme, FiniteSpace, ModuleSheaf};
use sesq_core::sesquiad::catalog;
use sesq_core::sesquiad::{AdditionFact, Sesquiad, SesquiadHom};
use sesq_core::smodule::{orbit_closure, scalar_action, ModuleHom, SesquiadModule};

use crate::format::{DefinitionFile, Entry, FormatError, Kind, Pos, Section, Token};

type Result<T> = std::result::Result<T, FormatError>;

/// What a task argument must name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arg {
    Sesquiad,
    Module,
    Hom,
    Map,
    Sheaf,
    /// A space or a sesquiad (whose spectrum is meant).
    Poset,
    /// An element of the target of the preceding map.
    TargetElement,
    Int,
}

/// Operations a task can run, with the arguments each one takes.
pub const OPS: &[(&str, &[Arg])] = &[
    ("spec", &[Arg::Sesquiad]),
    ("congruences", &[Arg::Sesquiad]),
    ("simple", &[Arg::Sesquiad]),
    ("residues", &[Arg::Sesquiad]),
    ("units", &[Arg::Sesquiad]),
    ("closed", &[Arg::Sesquiad, Arg::Int]),
    ("random", &[Arg::Sesquiad]),
    ("invariants", &[Arg::Module]),
    ("flat", &[Arg::Module]),
    ("tensor", &[Arg::Module, Arg::Module]),
    ("classify", &[Arg::Hom]),
    ("exact", &[Arg::Hom, Arg::Hom]),
    ("separable", &[Arg::Map, Arg::TargetElement]),
    ("unramified", &[Arg::Map]),
    ("etale", &[Arg::Map]),
    ("sections", &[Arg::Sheaf]),
    ("cohomology", &[Arg::Sheaf]),
    ("flabby", &[Arg::Sheaf]),
    ("dot", &[Arg::Poset]),
];

#[derive(Clone, Debug)]
pub struct Task {
    pub name: String,
    pub op: String,
    pub args: Vec<String>,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub sesquiads: BTreeMap<String, Arc<Sesquiad>>,
    pub spaces: BTreeMap<String, FiniteSpace>,
    pub modules: BTreeMap<String, SesquiadModule>,
    pub homs: BTreeMap<String, ModuleHom>,
    pub maps: BTreeMap<String, SesquiadHom>,
    pub sheaves: BTreeMap<String, ModuleSheaf>,
    pub tasks: Vec<Task>,
}

fn core_err(pos: Pos, e: sesq_core::Error) -> FormatError {
    FormatError::invariant(pos, e.to_string())
}

fn int(t: &Token) -> Result<i64> {
    t.text
        .parse()
        .map_err(|_| FormatError::syntax(t.pos, format!("expected an integer, found `{}`", t.text)))
}

fn count(t: &Token) -> Result<usize> {
    t.text
        .parse()
        .map_err(|_| FormatError::syntax(t.pos, format!("expected a count, found `{}`", t.text)))
}

fn big(t: &Token) -> Result<BigInt> {
    t.text
        .parse()
        .map_err(|_| FormatError::syntax(t.pos, format!("expected an integer, found `{}`", t.text)))
}

fn vector(tokens: &[Token], len: usize, pos: Pos) -> Result<Vector> {
    if tokens.len() != len {
        return Err(FormatError::syntax(
            pos,
            format!("expected {len} entries, found {}", tokens.len()),
        ));
    }
    tokens.iter().map(big).collect()
}

/// Rows separated by `/`.
fn matrix(tokens: &[Token], rows: usize, cols: usize, pos: Pos) -> Result<IntMatrix> {
    let parts: Vec<&[Token]> = if tokens.is_empty() {
        Vec::new()
    } else {
        tokens.split(|t| t.text == "/").collect()
    };
    let parts = if rows == 0 { Vec::new() } else { parts };
    if parts.len() != rows {
        return Err(FormatError::syntax(
            pos,
            format!("expected {rows} rows, found {}", parts.len()),
        ));
    }
    let data = parts
        .iter()
        .map(|r| vector(r, cols, r.first().map_or(pos, |t| t.pos)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_big_rows(rows, cols, &data))
}

fn expect_colon(e: &Entry, at: usize) -> Result<()> {
    match e.args.get(at) {
        Some(t) if t.text == ":" => Ok(()),
        Some(t) => Err(FormatError::syntax(
            t.pos,
            format!("expected `:`, found `{}`", t.text),
        )),
        None => Err(FormatError::syntax(e.key.pos, "expected `:`")),
    }
}

fn single<'a>(s: &'a Section, key: &str) -> Result<Option<&'a Entry>> {
    let all = s.entries(key);
    let first = all.first().copied();
    if let Some(dup) = all.get(1) {
        return Err(FormatError::syntax(
            dup.key.pos,
            format!("`{key}` given twice"),
        ));
    }
    Ok(first)
}

fn only(s: &Section, allowed: &[&str], because: &str) -> Result<()> {
    match s
        .entries
        .iter()
        .find(|e| !allowed.contains(&e.key.text.as_str()))
    {
        Some(e) => Err(FormatError::syntax(
            e.key.pos,
            format!("`{}` cannot be combined with `{because}`", e.key.text),
        )),
        None => Ok(()),
    }
}

fn element(a: &Sesquiad, t: &Token) -> Result<usize> {
    a.index_of(&t.text).ok_or_else(|| FormatError::unknown(t))
}

fn build_sesquiad(s: &Section) -> Result<Sesquiad> {
    if let Some(e) = single(s, "preset")? {
        only(s, &["preset"], "preset")?;
        let t = &e.args[0];
        return Ok(match t.text.as_str() {
            "f1" => catalog::f1(),
            "f2" => catalog::f2(),
            "f1_mod4" => catalog::f1_mod4(),
            "signs_f5" => catalog::signs_f5(),
            "idempotent" => catalog::idempotent(),
            _ => {
                return Err(FormatError::syntax(
                    t.pos,
                    format!("unknown preset `{}`", t.text),
                ))
            }
        });
    }
    if let Some(e) = single(s, "ring")? {
        only(s, &["ring"], "ring")?;
        let t = &e.args[0];
        let (ring, basis): (ZAlgebra, &[&str]) = match (t.text.as_str(), e.args.get(1)) {
            ("zmod", Some(n)) => {
                let n = int(n)?;
                if n < 2 {
                    return Err(FormatError::invariant(e.args[1].pos, "zmod needs n >= 2"));
                }
                (ZAlgebra::zmod(n), &["1"])
            }
            ("f4", None) => (ZAlgebra::f4(), &["1", "w"]),
            ("dual_f2", None) => (ZAlgebra::dual_numbers_f2(), &["1", "b"]),
            _ => {
                return Err(FormatError::syntax(
                    t.pos,
                    "expected `zmod N`, `f4` or `dual_f2`",
                ))
            }
        };
        return Sesquiad::ring_sesquiad(&ring, basis).map_err(|err| core_err(e.key.pos, err));
    }
    let elements = single(s, "elements")?.ok_or_else(|| {
        FormatError::syntax(s.pos, "sesquiad needs `elements`, `preset` or `ring`")
    })?;
    let names: Vec<String> = elements.args.iter().map(|t| t.text.clone()).collect();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, t) in elements.args.iter().enumerate() {
        if index.insert(t.text.as_str(), i).is_some() {
            return Err(FormatError::invariant(
                t.pos,
                format!("element `{}` listed twice", t.text),
            ));
        }
    }
    let n = names.len();
    let lookup = |t: &Token| {
        index
            .get(t.text.as_str())
            .copied()
            .ok_or_else(|| FormatError::unknown(t))
    };
    let named = |key: &str, default: &str| -> Result<usize> {
        match single(s, key)? {
            Some(e) => lookup(&e.args[0]),
            None => index.get(default).copied().ok_or_else(|| {
                FormatError::syntax(
                    s.pos,
                    format!("no element `{default}`; give `{key}` explicitly"),
                )
            }),
        }
    };
    let zero = named("zero", "0")?;
    let one = named("one", "1")?;

    let mut table: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut cells: Vec<Vec<Pos>> = vec![Vec::new(); n];
    for e in s.entries("mul") {
        let a = lookup(&e.args[0])?;
        expect_colon(e, 1)?;
        let row = &e.args[2..];
        if row.len() != n {
            return Err(FormatError::syntax(
                e.key.pos,
                format!(
                    "row `{}` needs {n} entries, found {}",
                    e.args[0].text,
                    row.len()
                ),
            ));
        }
        if table[a].is_some() {
            return Err(FormatError::syntax(
                e.key.pos,
                format!("row `{}` given twice", e.args[0].text),
            ));
        }
        table[a] = Some(row.iter().map(lookup).collect::<Result<_>>()?);
        cells[a] = row.iter().map(|t| t.pos).collect();
    }
    let mult: Vec<Vec<usize>> = table
        .into_iter()
        .enumerate()
        .map(|(a, r)| {
            r.ok_or_else(|| {
                FormatError::syntax(s.pos, format!("missing `mul` row for `{}`", names[a]))
            })
        })
        .collect::<Result<_>>()?;
    check_table(&mult, &cells, &names, zero, one)?;

    let mut facts = Vec::new();
    for e in s.entries("fact") {
        facts.push(parse_fact(e, &lookup)?);
    }
    Sesquiad::build(names, zero, one, mult, facts).map_err(|err| core_err(s.pos, err))
}

/// Commutativity, zero, unit and associativity, reported at the first
/// offending cell.
fn check_table(
    mult: &[Vec<usize>],
    cells: &[Vec<Pos>],
    names: &[String],
    zero: usize,
    one: usize,
) -> Result<()> {
    let n = mult.len();
    for a in 0..n {
        for b in 0..a {
            if mult[a][b] != mult[b][a] {
                return Err(FormatError::invariant(
                    cells[a][b],
                    format!(
                        "table is not commutative: {0}*{1} = {2} but {1}*{0} = {3}",
                        names[a], names[b], names[mult[a][b]], names[mult[b][a]]
                    ),
                ));
            }
        }
    }
    for x in 0..n {
        if mult[zero][x] != zero {
            return Err(FormatError::invariant(
                cells[zero][x],
                format!("{}*{} must be {}", names[zero], names[x], names[zero]),
            ));
        }
        if mult[one][x] != x {
            return Err(FormatError::invariant(
                cells[one][x],
                format!("{}*{} must be {}", names[one], names[x], names[x]),
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(FormatError::invariant(
                        cells[a][b],
                        format!(
                            "table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})",
                            names[a], names[b], names[c]
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `k*x + y + ... = z`.
fn parse_fact(e: &Entry, lookup: &dyn Fn(&Token) -> Result<usize>) -> Result<AdditionFact> {
    let args = &e.args;
    let eq = args
        .iter()
        .position(|t| t.text == "=")
        .ok_or_else(|| FormatError::syntax(e.key.pos, "fact needs `=`"))?;
    if eq + 2 != args.len() {
        return Err(FormatError::syntax(
            e.key.pos,
            "fact needs exactly one element after `=`",
        ));
    }
    let result = lookup(&args[eq + 1])?;
    let mut terms = Vec::new();
    for (i, t) in args[..eq].iter().enumerate() {
        let is_plus = t.text == "+";
        if is_plus != (i % 2 == 1) {
            return Err(FormatError::syntax(t.pos, "terms must be separated by `+`"));
        }
        if is_plus {
            continue;
        }
        let term = match t.text.split_once('*') {
            Some((k, x)) => {
                let k: i64 = k.parse().map_err(|_| {
                    FormatError::syntax(t.pos, format!("bad coefficient in `{}`", t.text))
                })?;
                let name = Token {
                    text: x.to_string(),
                    pos: Pos {
                        line: t.pos.line,
                        col: t.pos.col + t.text.len() - x.len(),
                    },
                };
                (k, lookup(&name)?)
            }
            None => (1, lookup(t)?),
        };
        terms.push(term);
    }
    if terms.is_empty() || args[..eq].last().is_some_and(|t| t.text == "+") {
        return Err(FormatError::syntax(
            e.key.pos,
            "fact needs at least one term",
        ));
    }
    Ok(AdditionFact::new(&terms, result))
}

fn build_space(s: &Section) -> Result<FiniteSpace> {
    if let Some(e) = single(s, "preset")? {
        only(s, &["preset"], "preset")?;
        let t = &e.args[0];
        return Ok(match t.text.as_str() {
            "empty" => FiniteSpace::empty(),
            "point" => FiniteSpace::point(),
            "sierpinski" => FiniteSpace::sierpinski(),
            "pseudocircle" => FiniteSpace::pseudocircle(),
            "wedge" => FiniteSpace::wedge(),
            _ => {
                return Err(FormatError::syntax(
                    t.pos,
                    format!("unknown preset `{}`", t.text),
                ))
            }
        });
    }
    let points = single(s, "points")?
        .map(|e| e.args.clone())
        .unwrap_or_default();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, t) in points.iter().enumerate() {
        if index.insert(t.text.as_str(), i).is_some() {
            return Err(FormatError::invariant(
                t.pos,
                format!("point `{}` listed twice", t.text),
            ));
        }
    }
    let lookup = |t: &Token| {
        index
            .get(t.text.as_str())
            .copied()
            .ok_or_else(|| FormatError::unknown(t))
    };
    let mut pairs = Vec::new();
    for e in s.entries("less") {
        let (x, y) = (lookup(&e.args[0])?, lookup(&e.args[1])?);
        pairs.push((x, y));
        let names: Vec<String> = points.iter().map(|t| t.text.clone()).collect();
        FiniteSpace::from_relations(names, &pairs).map_err(|err| core_err(e.key.pos, err))?;
    }
    let names = points.iter().map(|t| t.text.clone()).collect();
    FiniteSpace::from_relations(names, &pairs).map_err(|err| core_err(s.pos, err))
}

fn build_module(s: &Section, base: &Arc<Sesquiad>) -> Result<SesquiadModule> {
    if let Some(e) = single(s, "free")? {
        only(s, &["free"], "free")?;
        return Ok(SesquiadModule::free(base.clone(), count(&e.args[0])?));
    }
    let rank_entry = single(s, "rank")?
        .ok_or_else(|| FormatError::syntax(s.pos, "module needs `rank` or `free`"))?;
    let rank = count(&rank_entry.args[0])?;
    let relations = s
        .entries("relation")
        .into_iter()
        .map(|e| vector(&e.args, rank, e.key.pos))
        .collect::<Result<Vec<_>>>()?;
    let mut given: Vec<Option<IntMatrix>> = vec![None; base.len()];
    for e in s.entries("action") {
        let a = element(base, &e.args[0])?;
        expect_colon(e, 1)?;
        if given[a].is_some() {
            return Err(FormatError::syntax(
                e.key.pos,
                format!("action of `{}` given twice", e.args[0].text),
            ));
        }
        given[a] = Some(matrix(&e.args[2..], rank, rank, e.key.pos)?);
    }
    let action = if given.iter().all(Option::is_none) {
        scalar_action(base, rank).map_err(|err| core_err(s.pos, err))?
    } else {
        given
            .into_iter()
            .enumerate()
            .map(|(a, m)| match m {
                Some(m) => Ok(m),
                None if a == base.zero() => Ok(IntMatrix::zeros(rank, rank)),
                None if a == base.one() => Ok(IntMatrix::identity(rank)),
                None => Err(FormatError::syntax(
                    s.pos,
                    format!("missing `action` for `{}`", base.name(a)),
                )),
            })
            .collect::<Result<_>>()?
    };
    let carrier = FgModule::new(rank, relations)
        .with_action(action)
        .map_err(|err| core_err(s.pos, err))?;
    let mut gens = s
        .entries("point")
        .into_iter()
        .map(|e| vector(&e.args, rank, e.key.pos))
        .collect::<Result<Vec<_>>>()?;
    if gens.is_empty() {
        gens = (0..rank).map(|i| unit_vector(rank, i)).collect();
    }
    let points = orbit_closure(base, &carrier, &gens).map_err(|err| core_err(s.pos, err))?;
    SesquiadModule::new(base.clone(), carrier, points).map_err(|err| core_err(s.pos, err))
}

fn build_map(s: &Section, a: &Arc<Sesquiad>, b: &Arc<Sesquiad>) -> Result<SesquiadHom> {
    let mut map = vec![None; a.len()];
    for e in s.entries("send") {
        let x = element(a, &e.args[0])?;
        let y = element(b, &e.args[1])?;
        if map[x].replace(y).is_some() {
            return Err(FormatError::syntax(
                e.key.pos,
                format!("`{}` sent twice", e.args[0].text),
            ));
        }
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| FormatError::syntax(s.pos, format!("no `send` for `{}`", a.name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    SesquiadHom::new(a.clone(), b.clone(), map).map_err(|err| core_err(s.pos, err))
}

fn build_hom(s: &Section, m: &SesquiadModule, n: &SesquiadModule) -> Result<ModuleHom> {
    let mat = match single(s, "matrix")? {
        Some(e) => matrix(&e.args, n.rank(), m.rank(), e.key.pos)?,
        None => IntMatrix::zeros(n.rank(), m.rank()),
    };
    ModuleHom::from_matrix(m, n, mat).map_err(|err| core_err(s.pos, err))
}

impl Workspace {
    fn lookup<'a, T>(map: &'a BTreeMap<String, T>, t: &Token) -> Result<&'a T> {
        map.get(&t.text).ok_or_else(|| FormatError::unknown(t))
    }

    fn build_sheaf(&self, s: &Section) -> Result<ModuleSheaf> {
        let space_t = &single(s, "space")?
            .ok_or_else(|| FormatError::syntax(s.pos, "sheaf needs `space`"))?
            .args[0];
        let over_t = &single(s, "over")?
            .ok_or_else(|| FormatError::syntax(s.pos, "sheaf needs `over`"))?
            .args[0];
        let space = Self::lookup(&self.spaces, space_t)?.clone();
        let base = Self::lookup(&self.sesquiads, over_t)?.clone();
        let n = space.len();
        let default = single(s, "module")?
            .map(|e| Self::lookup(&self.modules, &e.args[0]))
            .transpose()?;
        let mut stalks: Vec<Option<SesquiadModule>> = vec![default.cloned(); n];
        let point = |t: &Token| {
            space
                .index_of(&t.text)
                .ok_or_else(|| FormatError::unknown(t))
        };
        for e in s.entries("stalk") {
            stalks[point(&e.args[0])?] = Some(Self::lookup(&self.modules, &e.args[1])?.clone());
        }
        let stalks = stalks
            .into_iter()
            .enumerate()
            .map(|(x, m)| {
                m.ok_or_else(|| {
                    FormatError::syntax(s.pos, format!("no stalk at `{}`", space.name(x)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (x, m) in stalks.iter().enumerate() {
            if **m.base() != *base {
                return Err(FormatError::invariant(
                    s.pos,
                    format!("stalk at `{}` is not over `{}`", space.name(x), over_t.text),
                ));
            }
        }
        let mut given: HashMap<(usize, usize), (IntMatrix, Pos)> = HashMap::new();
        for e in s.entries("restrict") {
            let (x, y) = (point(&e.args[0])?, point(&e.args[1])?);
            if x == y || !space.leq(y, x) {
                return Err(FormatError::invariant(
                    e.key.pos,
                    format!("`{}` is not above `{}`", e.args[0].text, e.args[1].text),
                ));
            }
            expect_colon(e, 2)?;
            let m = matrix(&e.args[3..], stalks[y].rank(), stalks[x].rank(), e.key.pos)?;
            given.insert((x, y), (m, e.key.pos));
        }
        let scheme = Arc::new(
            CongruenceScheme::constant(space.clone(), base).map_err(|err| core_err(s.pos, err))?,
        );
        let mut failure: Option<FormatError> = None;
        let result = ModuleSheaf::new(scheme, stalks.clone(), |x, y| {
            let (m, pos) = match given.get(&(x, y)) {
                Some((m, pos)) => (m.clone(), *pos),
                None if stalks[x].rank() == stalks[y].rank() => {
                    (IntMatrix::identity(stalks[x].rank()), s.pos)
                }
                None => {
                    let msg = format!(
                        "restriction `{}` -> `{}` needs a matrix",
                        space.name(x),
                        space.name(y)
                    );
                    failure.get_or_insert(FormatError::syntax(s.pos, msg.clone()));
                    return Err(sesq_core::Error::Invalid(msg));
                }
            };
            stalks[x]
                .points()
                .iter()
                .map(|p| {
                    stalks[y].index_of(&m.mul_vec(p)).ok_or_else(|| {
                        let msg = format!(
                            "restriction `{}` -> `{}` does not send points to points",
                            space.name(x),
                            space.name(y)
                        );
                        failure.get_or_insert(FormatError::invariant(pos, msg.clone()));
                        sesq_core::Error::NotEquivariant(msg)
                    })
                })
                .collect()
        });
        result.map_err(|err| failure.unwrap_or_else(|| core_err(s.pos, err)))
    }

    fn check_task(&self, s: &Section) -> Result<Task> {
        let e = single(s, "run")?.ok_or_else(|| FormatError::syntax(s.pos, "task needs `run`"))?;
        let op_t = &e.args[0];
        let (op, kinds) = OPS
            .iter()
            .find(|(name, _)| *name == op_t.text)
            .ok_or_else(|| {
                FormatError::syntax(op_t.pos, format!("unknown operation `{}`", op_t.text))
            })?;
        let args = &e.args[1..];
        if args.len() != kinds.len() {
            return Err(FormatError::syntax(
                e.key.pos,
                format!(
                    "`{op}` takes {} arguments, found {}",
                    kinds.len(),
                    args.len()
                ),
            ));
        }
        for (i, (t, k)) in args.iter().zip(kinds.iter()).enumerate() {
            let known = match k {
                Arg::Sesquiad => self.sesquiads.contains_key(&t.text),
                Arg::Module => self.modules.contains_key(&t.text),
                Arg::Hom => self.homs.contains_key(&t.text),
                Arg::Map => self.maps.contains_key(&t.text),
                Arg::Sheaf => self.sheaves.contains_key(&t.text),
                Arg::Poset => {
                    self.spaces.contains_key(&t.text) || self.sesquiads.contains_key(&t.text)
                }
                Arg::TargetElement => self.maps[&args[i - 1].text]
                    .target
                    .index_of(&t.text)
                    .is_some(),
                Arg::Int => {
                    count(t)?;
                    true
                }
            };
            if !known {
                return Err(FormatError::unknown(t));
            }
        }
        Ok(Task {
            name: s.name.text.clone(),
            op: op.to_string(),
            args: args.iter().map(|t| t.text.clone()).collect(),
            pos: s.pos,
        })
    }
}

pub fn build(file: &DefinitionFile) -> Result<Workspace> {
    let mut seen: HashMap<&str, Pos> = HashMap::new();
    for s in &file.sections {
        if seen.insert(s.name.text.as_str(), s.name.pos).is_some() {
            return Err(FormatError::invariant(
                s.name.pos,
                format!("name `{}` is defined twice", s.name.text),
            ));
        }
    }
    let of = |k: Kind| file.sections.iter().filter(move |s| s.kind == k);
    let mut w = Workspace::default();
    for s in of(Kind::Sesquiad) {
        w.sesquiads
            .insert(s.name.text.clone(), Arc::new(build_sesquiad(s)?));
    }
    for s in of(Kind::Space) {
        w.spaces.insert(s.name.text.clone(), build_space(s)?);
    }
    for s in of(Kind::Map) {
        let a = Workspace::lookup(&w.sesquiads, &s.refs[0])?;
        let b = Workspace::lookup(&w.sesquiads, &s.refs[1])?;
        let h = build_map(s, a, b)?;
        w.maps.insert(s.name.text.clone(), h);
    }
    for s in of(Kind::Module) {
        let base = Workspace::lookup(&w.sesquiads, &s.refs[0])?;
        let m = build_module(s, base)?;
        w.modules.insert(s.name.text.clone(), m);
    }
    for s in of(Kind::Hom) {
        let m = Workspace::lookup(&w.modules, &s.refs[0])?;
        let n = Workspace::lookup(&w.modules, &s.refs[1])?;
        if m.base() != n.base() {
            return Err(FormatError::invariant(
                s.pos,
                "modules live over different sesquiads",
            ));
        }
        let h = build_hom(s, m, n)?;
        w.homs.insert(s.name.text.clone(), h);
    }
    for s in of(Kind::Sheaf) {
        let f = w.build_sheaf(s)?;
        w.sheaves.insert(s.name.text.clone(), f);
    }
    for s in of(Kind::Task) {
        let t = w.check_task(s)?;
        w.tasks.push(t);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;

    fn err(text: &str) -> FormatError {
        build(&parse(text).unwrap()).unwrap_err()
    }

    #[test]
    fn non_commutative_table_points_at_the_cell() {
        let e = err("[sesquiad A]\nelements 0 1 a\nmul 0 : 0 0 0\nmul 1 : 0 1 a\nmul a : 0 0 a\n");
        assert!(matches!(e, FormatError::InvariantViolation { .. }), "{e}");
        assert_eq!((e.pos().line, e.pos().col), (5, 11));
    }

    #[test]
    fn undefined_module_is_an_unknown_reference() {
        let e = err("[sesquiad A]\npreset f1\n[task t]\nrun invariants M\n");
        assert_eq!(
            e,
            FormatError::UnknownReference {
                pos: Pos { line: 4, col: 16 },
                name: "M".into()
            }
        );
        assert_eq!(e.pos().col, 16);
    }

    #[test]
    fn facts_and_points() {
        let w = build(
            &parse(
                "[sesquiad F2]\nelements 0 1\nmul 0 : 0 0\nmul 1 : 0 1\nfact 1 + 1 = 0\n\
                 [module M over F2]\nrank 1\nrelation 2\npoint 1\n",
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(*w.sesquiads["F2"], catalog::f2());
        assert_eq!(w.modules["M"].len(), 2);
    }
}
