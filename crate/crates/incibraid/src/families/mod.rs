//! The classified solution families: 9×9 matrices on the two-element chain
//! `x < y` with flip restriction, and 25×25 matrices on `x ≺ y ≻ z` whose
//! restriction is the constant `x ↔ z` twist.
//!
//! Both are stored as sparse symbol grids (row = output, column = input,
//! 1-based) and realized by evaluating the symbols.

mod t56;
mod tab1;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::braiding::{LambdaTensor, Verdict};
use crate::coalgebra::IntervalBasis;
use crate::poset::Poset;
use crate::scalars::{Field, Scalar};

pub use t56::{t56_coordinates, theorem56_matrix, T56Coordinates, T56_GRID};
pub use tab1::{tab1_coordinates, table1_matrix, Tab1Coordinates, FIGURE1};

/// Attempts per draw before `random_params` gives up.
pub const MAX_REJECTIONS: usize = 2000;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    T56_1,
    T56_2a,
    T56_2b,
    T56_3a,
    T56_3b,
    T56_4a_i,
    T56_4a_ii,
    T56_4b_i,
    T56_4b_ii,
    T56_4c,
    Tab1_1,
    Tab1_2a,
    Tab1_2b,
    Tab1_3a,
    Tab1_3b,
    Tab1_3c,
    Tab1_4a,
    Tab1_4b,
}

use FamilyId::*;

impl FamilyId {
    pub const ALL: [FamilyId; 18] = [
        T56_1, T56_2a, T56_2b, T56_3a, T56_3b, T56_4a_i, T56_4a_ii, T56_4b_i, T56_4b_ii, T56_4c, Tab1_1, Tab1_2a,
        Tab1_2b, Tab1_3a, Tab1_3b, Tab1_3c, Tab1_4a, Tab1_4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            T56_1 => "T56-1",
            T56_2a => "T56-2a",
            T56_2b => "T56-2b",
            T56_3a => "T56-3a",
            T56_3b => "T56-3b",
            T56_4a_i => "T56-4a-i",
            T56_4a_ii => "T56-4a-ii",
            T56_4b_i => "T56-4b-i",
            T56_4b_ii => "T56-4b-ii",
            T56_4c => "T56-4c",
            Tab1_1 => "TAB1-1",
            Tab1_2a => "TAB1-2a",
            Tab1_2b => "TAB1-2b",
            Tab1_3a => "TAB1-3a",
            Tab1_3b => "TAB1-3b",
            Tab1_3c => "TAB1-3c",
            Tab1_4a => "TAB1-4a",
            Tab1_4b => "TAB1-4b",
        }
    }

    pub fn is_t56(self) -> bool {
        self < Tab1_1
    }

    pub fn t56() -> impl Iterator<Item = FamilyId> {
        Self::ALL.into_iter().filter(|f| f.is_t56())
    }

    pub fn tab1() -> impl Iterator<Item = FamilyId> {
        Self::ALL.into_iter().filter(|f| !f.is_t56())
    }

    /// Required parameter names, then optional ones.
    pub fn param_names(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            T56_1 => (&["alpha1", "alpha2", "alpha3"], &[]),
            T56_2a | T56_2b => (&["alpha1", "Gamma1"], &[]),
            T56_3a => (&["beta1", "beta2", "Gamma1"], &[]),
            T56_3b => (&["beta1", "beta3"], &[]),
            T56_4a_i => (&["C", "beta2", "beta4"], &[]),
            T56_4a_ii => (&["Gamma1", "beta4"], &[]),
            T56_4b_i => (&["beta1", "beta4"], &["Gamma1"]),
            T56_4b_ii => (&["beta1", "beta2", "beta4"], &[]),
            T56_4c => (&["C", "beta1", "beta2", "beta3"], &[]),
            Tab1_1 => (&["alpha1", "alpha4", "alpha6", "C1", "C2"], &[]),
            Tab1_2a => (&["C1", "Gamma7", "C2"], &["eps1", "eps4", "eps6"]),
            Tab1_2b => (&["C1", "Gamma16", "Gamma7", "C2"], &["eps1", "eps4"]),
            Tab1_3a => (&["beta1", "C1", "Gamma1", "Gamma10"], &[]),
            Tab1_3b => (&["beta1", "beta2", "C1", "C4", "Gamma1", "Gamma10"], &[]),
            Tab1_3c => (&["beta1", "beta2", "beta5", "C1"], &[]),
            Tab1_4a => (&["alpha1", "alpha4", "alpha6", "C1", "C2", "C3", "C4"], &[]),
            Tab1_4b => (&["C1", "C3", "C4", "Gamma10", "C2"], &["eps1", "eps4", "eps6"]),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| FamilyError::UnknownFamily(t.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: violates \"{clause}\"")]
    Constraint { family: FamilyId, clause: String },
    #[error("{family}: missing parameter {name}")]
    MissingParam { family: FamilyId, name: String },
    #[error("{family}: unknown parameter {name}")]
    UnknownParam { family: FamilyId, name: String },
    #[error("{family}: parameter {name} does not lie in {field}")]
    FieldMismatch { family: FamilyId, name: String, field: Field },
    #[error("{family}: ε with ε² = {c2} absent in {field}")]
    NoSquareRoot { family: FamilyId, c2: Scalar, field: Field },
    #[error("{family}: no valid parameters found in {field} after {tries} draws")]
    NoValidParams { family: FamilyId, field: Field, tries: usize },
}

/// A family id with a parameter assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family_id: FamilyId,
    pub params: BTreeMap<String, Scalar>,
    pub field: Field,
}

impl FamilyInstance {
    pub fn new(family_id: FamilyId, field: Field) -> FamilyInstance {
        FamilyInstance {
            family_id,
            params: BTreeMap::new(),
            field,
        }
    }

    pub fn with(mut self, name: &str, v: Scalar) -> FamilyInstance {
        self.params.insert(name.to_string(), v);
        self
    }

    /// Integer-valued parameters, handy in tests.
    pub fn with_ints(family_id: FamilyId, field: Field, ps: &[(&str, i64)]) -> FamilyInstance {
        ps.iter()
            .fold(Self::new(family_id, field), |acc, (k, v)| acc.with(k, field.int(*v)))
    }

    pub(crate) fn check_names(&self) -> Result<(), FamilyError> {
        let (req, opt) = self.family_id.param_names();
        for (k, v) in &self.params {
            if !req.contains(&k.as_str()) && !opt.contains(&k.as_str()) {
                return Err(FamilyError::UnknownParam {
                    family: self.family_id,
                    name: k.clone(),
                });
            }
            if v.field() != self.field {
                return Err(FamilyError::FieldMismatch {
                    family: self.family_id,
                    name: k.clone(),
                    field: self.field,
                });
            }
        }
        for k in req {
            if !self.params.contains_key(*k) {
                return Err(FamilyError::MissingParam {
                    family: self.family_id,
                    name: k.to_string(),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn get(&self, name: &str) -> Scalar {
        self.params.get(name).cloned().expect("checked by check_names")
    }

    pub(crate) fn opt(&self, name: &str) -> Option<Scalar> {
        self.params.get(name).cloned()
    }

    pub(crate) fn require(&self, cond: bool, clause: &str) -> Result<(), FamilyError> {
        if cond {
            Ok(())
        } else {
            Err(FamilyError::Constraint {
                family: self.family_id,
                clause: clause.to_string(),
            })
        }
    }

    pub(crate) fn odd_characteristic(&self) -> Result<(), FamilyError> {
        self.require(self.field.characteristic() != 2, "char K ≠ 2")
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", v.plain())).collect();
        write!(f, "{}({})", self.family_id, ps.join(", "))
    }
}

/// Values of the grid symbols `a_k, b_k, G_k, A_k, B_k` (1-based).
#[derive(Debug, Clone)]
pub(crate) struct Symbols {
    pub one: Scalar,
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub g: Vec<Scalar>,
    pub big_a: Vec<Scalar>,
    pub big_b: Vec<Scalar>,
}

impl Symbols {
    pub fn new(field: Field, na: usize, ng: usize, nbig_a: usize, nbig_b: usize) -> Symbols {
        let z = |n: usize| vec![field.zero(); n + 1];
        Symbols {
            one: field.one(),
            a: z(na),
            b: z(na),
            g: z(ng),
            big_a: z(nbig_a),
            big_b: z(nbig_b),
        }
    }

    pub fn value(&self, sym: &str) -> Scalar {
        let (neg, s) = match sym.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, sym),
        };
        let v = if s == "1" {
            self.one.clone()
        } else {
            let split = s.find(|c: char| c.is_ascii_digit()).expect("symbol index");
            let k: usize = s[split..].parse().expect("symbol index");
            match &s[..split] {
                "a" => self.a[k].clone(),
                "b" => self.b[k].clone(),
                "G" => self.g[k].clone(),
                "A" => self.big_a[k].clone(),
                "B" => self.big_b[k].clone(),
                other => panic!("unknown grid symbol {other}"),
            }
        };
        if neg {
            -v
        } else {
            v
        }
    }
}

/// Fills a symbol grid into a dense matrix with rows = outputs.
pub(crate) fn realize(basis: Arc<IntervalBasis>, field: Field, grid: &[(usize, usize, &str)], s: &Symbols) -> LambdaTensor {
    let n = basis.len() * basis.len();
    let mut rows = vec![vec![field.zero(); n]; n];
    for &(r, c, sym) in grid {
        rows[r - 1][c - 1] = s.value(sym);
    }
    LambdaTensor::from_dense(basis, field, &rows, false)
}

/// Position of the first unsigned occurrence of `sym`, as 0-based (row, col).
pub(crate) fn position(grid: &[(usize, usize, &str)], sym: &str) -> (usize, usize) {
    grid.iter()
        .find(|(_, _, s)| *s == sym)
        .map(|&(r, c, _)| (r - 1, c - 1))
        .unwrap_or_else(|| panic!("{sym} not in grid"))
}

/// Dense entry at 0-based (row = output, col = input).
pub(crate) fn dense_entry(t: &LambdaTensor, row: usize, col: usize) -> Scalar {
    t.map().entry(row, col)
}

/// `λ_{a|b|c|d}^{c|d|a|b} = 1` on any poset, over `Q`.
pub fn flip_solution(p: &Poset) -> LambdaTensor {
    flip_solution_in(p, Field::Rational)
}

pub fn flip_solution_in(p: &Poset, field: Field) -> LambdaTensor {
    let basis = Arc::new(IntervalBasis::new(p.clone()));
    let map = crate::coalgebra::LinearMap::flip(field, basis.len());
    LambdaTensor::from_map(basis, map)
}

/// Realizes any family instance.
pub fn generate(inst: &FamilyInstance) -> Result<LambdaTensor, FamilyError> {
    inst.check_names()?;
    if inst.family_id.is_t56() {
        theorem56_matrix(inst)
    } else {
        table1_matrix(inst)
    }
}

/// Every family whose regenerated matrix equals `t` entry for entry, with
/// the parameters read back. Families overlap, so several may match.
pub fn family_membership(t: &LambdaTensor) -> Vec<FamilyInstance> {
    let mut out = Vec::new();
    for cand in t56::candidates(t).into_iter().chain(tab1::candidates(t)) {
        if out.iter().any(|o: &FamilyInstance| o.family_id == cand.family_id) {
            continue;
        }
        if let Ok(g) = generate(&cand) {
            if g == *t {
                out.push(cand);
            }
        }
    }
    out
}

/// A valid random instance, rejection-sampling the exclusion clauses.
pub fn random_params<R: Rng + ?Sized>(id: FamilyId, field: Field, rng: &mut R) -> Result<FamilyInstance, FamilyError> {
    for _ in 0..MAX_REJECTIONS {
        let cand = if id.is_t56() {
            t56::draw(id, field, rng)
        } else {
            tab1::draw(id, field, rng)?
        };
        if generate(&cand).is_ok() {
            return Ok(cand);
        }
    }
    Err(FamilyError::NoValidParams {
        family: id,
        field,
        tries: MAX_REJECTIONS,
    })
}

/// Every valid instance over a finite field, optional parameters included
/// both absent and at every value. `None` over `Q` or past `limit` tuples.
pub fn enumerate_instances(id: FamilyId, field: Field, limit: u64) -> Option<Vec<FamilyInstance>> {
    let elems = field.elements()?;
    let (req, opt) = id.param_names();
    let q = elems.len() as u64;
    let total = q.checked_pow(req.len() as u32)?.checked_mul((q + 1).checked_pow(opt.len() as u32)?)?;
    if total > limit {
        return None;
    }
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut inst = FamilyInstance::new(id, field);
        for name in req {
            inst = inst.with(name, elems[(code % q) as usize].clone());
            code /= q;
        }
        for name in opt {
            let d = code % (q + 1);
            code /= q + 1;
            if d < q {
                inst = inst.with(name, elems[d as usize].clone());
            }
        }
        if generate(&inst).is_ok() {
            out.push(inst);
        }
    }
    Some(out)
}

/// Nonzero entries outside the displayed shape (the 9×9 grid on the chain,
/// the 81-cell grid on the vee). Fails for tensors on any other basis.
pub fn check_zero_pattern(t: &LambdaTensor) -> Verdict {
    let name = "zero-pattern";
    let grid: &[(usize, usize, &str)] = match t.basis().len() {
        3 => &T56_GRID,
        5 => &FIGURE1,
        n => return Verdict::fail(name, format!("no displayed shape for |Y| = {n}")),
    };
    let n = t.basis().len().pow(2);
    let mut bad = Vec::new();
    for col in 0..n {
        for (row, _) in t.map().column(col) {
            if !grid.iter().any(|&(r, c, _)| r == row + 1 && c == col + 1) {
                bad.push(format!("nonzero at row {}, column {}", row + 1, col + 1));
            }
        }
    }
    Verdict::from_witnesses(name, bad)
}

/// Same order relation on the same element indices; labels may differ.
pub(crate) fn same_basis(t: &LambdaTensor, p: &Poset) -> bool {
    let q = t.poset();
    q.len() == p.len() && (0..p.len()).all(|a| (0..p.len()).all(|b| q.leq(a, b) == p.leq(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert_eq!(FamilyId::t56().count(), 10);
        assert_eq!(FamilyId::tab1().count(), 8);
        assert!("T56-9".parse::<FamilyId>().is_err());
    }

    #[test]
    fn flip_on_point() {
        let p = Poset::chain(1);
        let t = flip_solution(&p);
        assert_eq!(t.entries().len(), 1);
    }

    #[test]
    fn unknown_parameter() {
        let inst = FamilyInstance::with_ints(T56_1, Field::Rational, &[("alpha1", 1), ("alpha2", 1), ("alpha3", 1), ("beta9", 0)]);
        assert!(matches!(generate(&inst), Err(FamilyError::UnknownParam { .. })));
    }
}
