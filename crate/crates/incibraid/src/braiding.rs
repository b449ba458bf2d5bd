//! Coefficient tensors `λ_{a|b|c|d}^{e|f|g|h}` of a linear map `r` on `D⊗D`
//! and the structural checks that make `r` a non-degenerate coalgebra
//! automorphism.
//!
//! `r((a,b)⊗(c,d)) = Σ λ_{a|b|c|d}^{e|f|g|h} (e,f)⊗(g,h)`. The realized matrix
//! has rows indexed by outputs and columns by inputs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coalgebra::{IntervalBasis, LinearMap, SparseVec};
use crate::poset::Poset;
use crate::scalars::{Field, Scalar};

/// Four element indices `(a,b,c,d)` naming `(a,b)⊗(c,d)`.
pub type Quad = [usize; 4];

/// Maximum number of witnesses kept in a verdict.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidingError {
    #[error("({0},{1}) is not an interval")]
    NotInterval(String, String),
    #[error("r((a,a)⊗(c,c)) for (a,c) = ({0},{1}) is not a single group-like term with coefficient 1")]
    NotGroupLike(String, String),
    #[error("translation {0} is not bijective")]
    NotBijective(String),
    #[error("translation {0} is not an order automorphism")]
    NotOrderAutomorphism(String),
    #[error("translations {0} and {1} differ inside one connected component")]
    NotConstantOnComponents(String, String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("seed value missing for {0}")]
    MissingSeedValue(String),
    #[error("configuration dependence at {0}: {1} vs {2}")]
    ConfigurationDependence(String, String, String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("quadruple outside the support region: {0}")]
    OutsideSupport(String),
}

/// Outcome of one check. Witnesses are human-readable and capped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

impl Verdict {
    pub fn from_witnesses<I: IntoIterator<Item = String>>(check: &str, it: I) -> Verdict {
        let mut witnesses = Vec::new();
        let mut violations = 0;
        for w in it {
            violations += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(w);
            }
        }
        Verdict {
            check: check.to_string(),
            passed: violations == 0,
            violations,
            witnesses,
        }
    }

    pub fn pass(check: &str) -> Verdict {
        Self::from_witnesses(check, std::iter::empty())
    }

    pub fn fail(check: &str, why: String) -> Verdict {
        Self::from_witnesses(check, std::iter::once(why))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{}: pass", self.check)
        } else {
            write!(f, "{}: FAIL ({} violations)", self.check, self.violations)?;
            for w in &self.witnesses {
                write!(f, "\n    {w}")?;
            }
            Ok(())
        }
    }
}

/// The set-level restriction `r_|(a,c) = (^a c, a^c)` with inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSolution {
    poset: Poset,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    left_inv: Vec<Vec<usize>>,
    right_inv: Vec<Vec<usize>>,
}

impl SetSolution {
    /// `left[a][c] = ^a c`, `right[a][c] = a^c`. Checks that every
    /// translation is a bijection.
    pub fn new(poset: Poset, left: Vec<Vec<usize>>, right: Vec<Vec<usize>>) -> Result<SetSolution, BraidingError> {
        let n = poset.len();
        let mut left_inv = vec![vec![usize::MAX; n]; n];
        let mut right_inv = vec![vec![usize::MAX; n]; n];
        for a in 0..n {
            for c in 0..n {
                let e = left[a][c];
                if e >= n || left_inv[a][e] != usize::MAX {
                    return Err(BraidingError::NotBijective(format!("^{}(-)", poset.label(a))));
                }
                left_inv[a][e] = c;
                let g = right[a][c];
                if g >= n || right_inv[c][g] != usize::MAX {
                    return Err(BraidingError::NotBijective(format!("(-)^{}", poset.label(c))));
                }
                right_inv[c][g] = a;
            }
        }
        Ok(SetSolution {
            poset,
            left,
            right,
            left_inv,
            right_inv,
        })
    }

    /// `r_|(a,c) = (c,a)`.
    pub fn flip(poset: Poset) -> SetSolution {
        let n = poset.len();
        let left = (0..n).map(|_| (0..n).collect()).collect();
        let right = (0..n).map(|a| vec![a; n]).collect();
        SetSolution::new(poset, left, right).unwrap()
    }

    /// `^a(-) = phi_l` and `(-)^c = phi_r` for every `a`, `c`.
    pub fn constant(poset: Poset, phi_l: &[usize], phi_r: &[usize]) -> Result<SetSolution, BraidingError> {
        let n = poset.len();
        let left = (0..n).map(|_| phi_l.to_vec()).collect();
        let right = (0..n).map(|a| vec![phi_r[a]; n]).collect();
        SetSolution::new(poset, left, right)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// `^a c`.
    pub fn l(&self, a: usize, c: usize) -> usize {
        self.left[a][c]
    }

    /// `a^c`.
    pub fn r(&self, a: usize, c: usize) -> usize {
        self.right[a][c]
    }

    /// `^ā e`: the `c` with `^a c = e`.
    pub fn linv(&self, a: usize, e: usize) -> usize {
        self.left_inv[a][e]
    }

    /// `g^c̄`: the `a` with `a^c = g`.
    pub fn rinv(&self, g: usize, c: usize) -> usize {
        self.right_inv[c][g]
    }

    /// Left translation `^a(-)` as a map.
    pub fn left_map(&self, a: usize) -> &[usize] {
        &self.left[a]
    }

    /// Right translation `(-)^c` as a map.
    pub fn right_map(&self, c: usize) -> Vec<usize> {
        (0..self.poset.len()).map(|a| self.right[a][c]).collect()
    }

    /// Order automorphisms, constant on connected components.
    pub fn check_translations(&self) -> Result<(), BraidingError> {
        let p = &self.poset;
        let n = p.len();
        for a in 0..n {
            if !p.is_order_automorphism(&self.left[a]) {
                return Err(BraidingError::NotOrderAutomorphism(format!("^{}(-)", p.label(a))));
            }
            if !p.is_order_automorphism(&self.right_map(a)) {
                return Err(BraidingError::NotOrderAutomorphism(format!("(-)^{}", p.label(a))));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if p.component_of(a) != p.component_of(b) {
                    continue;
                }
                if self.left[a] != self.left[b] {
                    return Err(BraidingError::NotConstantOnComponents(
                        format!("^{}(-)", p.label(a)),
                        format!("^{}(-)", p.label(b)),
                    ));
                }
                if self.right_map(a) != self.right_map(b) {
                    return Err(BraidingError::NotConstantOnComponents(
                        format!("(-)^{}", p.label(a)),
                        format!("(-)^{}", p.label(b)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `r_|` is a bijection of `X×X`.
    pub fn is_bijective(&self) -> bool {
        let n = self.poset.len();
        let mut seen = vec![false; n * n];
        for a in 0..n {
            for c in 0..n {
                let k = self.l(a, c) * n + self.r(a, c);
                if std::mem::replace(&mut seen[k], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// The three set-level braid identities; the witness is the first failing
/// triple `(a,b,c)` with the identity number.
pub fn check_set_solution(s: &SetSolution) -> Result<(), (usize, usize, usize, u8)> {
    let n = s.poset.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // ^a(^b c) = ^{^a b}(^{a^b} c)
                if s.l(a, s.l(b, c)) != s.l(s.l(a, b), s.l(s.r(a, b), c)) {
                    return Err((a, b, c, 1));
                }
                // (a^b)^c = (a^{^b c})^{b^c}
                if s.r(s.r(a, b), c) != s.r(s.r(a, s.l(b, c)), s.r(b, c)) {
                    return Err((a, b, c, 2));
                }
                // ^{a^{^b c}}(b^c) = (^a b)^{^{a^b} c}
                if s.l(s.r(a, s.l(b, c)), s.r(b, c)) != s.r(s.l(a, b), s.l(s.r(a, b), c)) {
                    return Err((a, b, c, 3));
                }
            }
        }
    }
    Ok(())
}

/// A sparse coefficient family, immutable once built.
#[derive(Debug, Clone)]
pub struct LambdaTensor {
    basis: Arc<IntervalBasis>,
    field: Field,
    map: LinearMap,
    lookup: HashMap<(usize, usize), Scalar>,
}

impl PartialEq for LambdaTensor {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.basis.pairs() == o.basis.pairs() && self.map == o.map
    }
}

impl LambdaTensor {
    /// Builds from `(input, output, value)` records; repeated keys add up and
    /// zero values are dropped.
    pub fn new<I>(basis: Arc<IntervalBasis>, field: Field, entries: I) -> Result<LambdaTensor, BraidingError>
    where
        I: IntoIterator<Item = (Quad, Quad, Scalar)>,
    {
        let n = basis.len();
        let mut cols = vec![Vec::new(); n * n];
        for (i, o, v) in entries {
            if v.field() != field {
                return Err(BraidingError::FieldMismatch);
            }
            let jin = pair2(&basis, i)?;
            let jout = pair2(&basis, o)?;
            cols[jin].push((jout, v));
        }
        Ok(Self::from_map(basis, LinearMap::from_columns(field, n, 2, cols)))
    }

    pub fn from_map(basis: Arc<IntervalBasis>, map: LinearMap) -> LambdaTensor {
        assert_eq!(map.base(), basis.len());
        assert_eq!(map.power(), 2);
        let mut lookup = HashMap::new();
        for j in 0..map.dim() {
            for (i, v) in map.column(j) {
                lookup.insert((j, *i), v.clone());
            }
        }
        LambdaTensor {
            field: map.field(),
            basis,
            map,
            lookup,
        }
    }

    /// From a dense `|Y|²×|Y|²` matrix. Rows are outputs unless
    /// `transpose` is set, in which case rows are inputs.
    pub fn from_dense(basis: Arc<IntervalBasis>, field: Field, rows: &[Vec<Scalar>], transpose: bool) -> LambdaTensor {
        let n = basis.len();
        let m = if transpose {
            let t: Vec<Vec<Scalar>> = (0..n * n).map(|i| (0..n * n).map(|j| rows[j][i].clone()).collect()).collect();
            LinearMap::from_dense(field, n, 2, &t)
        } else {
            LinearMap::from_dense(field, n, 2, rows)
        };
        Self::from_map(basis, m)
    }

    pub fn basis(&self) -> &Arc<IntervalBasis> {
        &self.basis
    }

    pub fn poset(&self) -> &Poset {
        self.basis.poset()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The realized map on `D⊗D`.
    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    /// `λ_{a|b|c|d}^{e|f|g|h}`, zero when any pair is not an interval.
    pub fn lam(&self, i: Quad, o: Quad) -> Scalar {
        match (pair2(&self.basis, i), pair2(&self.basis, o)) {
            (Ok(ji), Ok(jo)) => self.lookup.get(&(ji, jo)).cloned().unwrap_or_else(|| self.field.zero()),
            _ => self.field.zero(),
        }
    }

    /// Nonzero entries as `(input, output, value)` in basis order.
    pub fn entries(&self) -> Vec<(Quad, Quad, Scalar)> {
        let mut out = Vec::new();
        for j in 0..self.map.dim() {
            for (i, v) in self.map.column(j) {
                out.push((self.quad(j), self.quad(*i), v.clone()));
            }
        }
        out
    }

    pub fn quad(&self, j: usize) -> Quad {
        let n = self.basis.len();
        let (a, b) = self.basis.pair(j / n);
        let (c, d) = self.basis.pair(j % n);
        [a, b, c, d]
    }

    /// Sparse image of `(a,b)⊗(c,d)` as `(output quad, coefficient)` pairs.
    pub fn column(&self, i: Quad) -> Vec<(Quad, Scalar)> {
        match pair2(&self.basis, i) {
            Ok(j) => self.map.column(j).iter().map(|(o, v)| (self.quad(*o), v.clone())).collect(),
            Err(_) => Vec::new(),
        }
    }

    pub fn with_entry(&self, i: Quad, o: Quad, v: Scalar) -> Result<LambdaTensor, BraidingError> {
        let ji = pair2(&self.basis, i)?;
        let jo = pair2(&self.basis, o)?;
        let n = self.basis.len();
        let mut cols: Vec<SparseVec> = (0..n * n).map(|j| self.map.column(j).clone()).collect();
        cols[ji].retain(|(k, _)| *k != jo);
        cols[ji].push((jo, v));
        Ok(Self::from_map(self.basis.clone(), LinearMap::from_columns(self.field, n, 2, cols)))
    }

    pub fn fmt_quad(&self, q: Quad) -> String {
        let p = self.poset();
        format!("{}|{}|{}|{}", p.label(q[0]), p.label(q[1]), p.label(q[2]), p.label(q[3]))
    }

    pub fn fmt_entry(&self, i: Quad, o: Quad) -> String {
        format!("λ_{{{}}}^{{{}}}", self.fmt_quad(i), self.fmt_quad(o))
    }
}

fn pair2(basis: &IntervalBasis, q: Quad) -> Result<usize, BraidingError> {
    let not = |a: usize, b: usize| {
        BraidingError::NotInterval(basis.poset().label(a).to_string(), basis.poset().label(b).to_string())
    };
    let i = basis.index(q[0], q[1]).ok_or_else(|| not(q[0], q[1]))?;
    let j = basis.index(q[2], q[3]).ok_or_else(|| not(q[2], q[3]))?;
    Ok(i * basis.len() + j)
}

/// `r((a,b)⊗(c,d))` as a linear combination of basis tensors.
pub fn apply_r(t: &LambdaTensor, ab: (usize, usize), cd: (usize, usize)) -> Result<Vec<(Quad, Scalar)>, BraidingError> {
    pair2(&t.basis, [ab.0, ab.1, cd.0, cd.1])?;
    Ok(t.column([ab.0, ab.1, cd.0, cd.1]))
}

/// Reads `r_|` off the action on group-likes and checks that each image is
/// a single group-like term with coefficient 1.
pub fn extract_restriction(t: &LambdaTensor) -> Result<SetSolution, BraidingError> {
    let p = t.poset();
    let n = p.len();
    let mut left = vec![vec![0; n]; n];
    let mut right = vec![vec![0; n]; n];
    for a in 0..n {
        for c in 0..n {
            let col = t.column([a, a, c, c]);
            match col.as_slice() {
                [([e, f, g, h], v)] if e == f && g == h && v.is_one() => {
                    left[a][c] = *e;
                    right[a][c] = *g;
                }
                _ => return Err(BraidingError::NotGroupLike(p.label(a).into(), p.label(c).into())),
            }
        }
    }
    let s = SetSolution::new(p.clone(), left, right)?;
    s.check_translations()?;
    Ok(s)
}

/// Basis tensors of `D⊗D` as quadruples, in basis order.
pub fn inputs(basis: &IntervalBasis) -> Vec<Quad> {
    let mut out = Vec::new();
    for &(a, b) in basis.pairs() {
        for &(c, d) in basis.pairs() {
            out.push([a, b, c, d]);
        }
    }
    out
}

/// Outputs `(e,f)⊗(g,h)` inside the support region for input `i`.
pub fn support_region(t: &LambdaTensor, s: &SetSolution, i: Quad) -> Vec<Quad> {
    let p = t.poset();
    let [a, b, c, d] = i;
    let ev = p.interval(s.l(a, c), s.l(a, d));
    let gv = p.interval(s.r(a, c), s.r(b, c));
    let mut out = Vec::new();
    for &e in &ev {
        for &f in &ev {
            if !p.leq(e, f) {
                continue;
            }
            for &g in &gv {
                for &h in &gv {
                    if p.leq(g, h) {
                        out.push([e, f, g, h]);
                    }
                }
            }
        }
    }
    out
}

/// `Σ_{e,g} λ_{a|b|c|d}^{e|e|g|g} = δ_{ab}δ_{cd}`.
pub fn check_counit(t: &LambdaTensor) -> Verdict {
    let field = t.field();
    let w = inputs(&t.basis).into_iter().filter_map(|i| {
        let mut sum = field.zero();
        for ([e, f, g, h], v) in t.column(i) {
            if e == f && g == h {
                sum += &v;
            }
        }
        let want = if i[0] == i[1] && i[2] == i[3] { field.one() } else { field.zero() };
        (sum != want).then(|| format!("input {}: sum {} expected {}", t.fmt_quad(i), sum, want))
    });
    Verdict::from_witnesses("counit", w)
}

type Key8 = [usize; 8];

/// Both sides of the comultiplicativity identity for one input, via index
/// sums: returns (expected, computed) keyed by `(e,y,g,z,y',f,z',h)`.
fn comult_index_sides(t: &LambdaTensor, i: Quad) -> (BTreeMap<Key8, Scalar>, BTreeMap<Key8, Scalar>) {
    let p = t.poset();
    let [a, b, c, d] = i;
    let mut expected = BTreeMap::new();
    for ([e, f, g, h], v) in t.column(i) {
        for y in p.interval(e, f) {
            for z in p.interval(g, h) {
                expected.insert([e, y, g, z, y, f, z, h], v.clone());
            }
        }
    }
    let mut computed: BTreeMap<Key8, Scalar> = BTreeMap::new();
    for pp in p.interval(a, b) {
        for q in p.interval(c, d) {
            let left = t.column([a, pp, c, q]);
            let right = t.column([pp, b, q, d]);
            for ([e, y, g, z], v1) in &left {
                for ([y2, f, z2, h], v2) in &right {
                    let k = [*e, *y, *g, *z, *y2, *f, *z2, *h];
                    let x = v1 * v2;
                    match computed.get_mut(&k) {
                        Some(s) => *s += &x,
                        None => {
                            computed.insert(k, x);
                        }
                    }
                }
            }
        }
    }
    computed.retain(|_, v| !v.is_zero());
    (expected, computed)
}

/// `Δ_{D⊗D}(u⊗v) = Σ (e,y)⊗(g,z)⊗(y,f)⊗(z,h)` on a sparse vector of `D⊗D`.
fn delta2(basis: &IntervalBasis, v: &SparseVec) -> BTreeMap<usize, Scalar> {
    let n = basis.len();
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (j, x) in v {
        let (e, f) = basis.pair(j / n);
        let (g, h) = basis.pair(j % n);
        for ((_, y), _) in basis.delta(e, f).unwrap() {
            for ((_, z), _) in basis.delta(g, h).unwrap() {
                let k = ((basis.index(e, y).unwrap() * n + basis.index(g, z).unwrap()) * n
                    + basis.index(y, f).unwrap())
                    * n
                    + basis.index(z, h).unwrap();
                match out.get_mut(&k) {
                    Some(s) => *s += x,
                    None => {
                        out.insert(k, x.clone());
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `(r⊗r)` on a vector of `D^{⊗4}`.
fn r_tensor_r(t: &LambdaTensor, v: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
    let n = t.basis.len();
    let nn = n * n;
    let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, x) in v {
        let (hi, lo) = (k / nn, k % nn);
        for (o1, v1) in t.map.column(hi) {
            for (o2, v2) in t.map.column(lo) {
                let key = o1 * nn + o2;
                let y = x * v1 * v2;
                match out.get_mut(&key) {
                    Some(s) => *s += &y,
                    None => {
                        out.insert(key, y);
                    }
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Comultiplicativity by the index identities (eq1 and eq2). Witnesses name
/// the input and the `(e,y,g,z | y',f,z',h)` index.
pub fn comultiplicativity_index(t: &LambdaTensor) -> Vec<String> {
    let p = t.poset();
    let mut w = Vec::new();
    for i in inputs(&t.basis) {
        let (exp, got) = comult_index_sides(t, i);
        let zero = t.field().zero();
        for k in exp.keys().chain(got.keys()) {
            let (x, y) = (exp.get(k).unwrap_or(&zero), got.get(k).unwrap_or(&zero));
            if x != y {
                let l: Vec<&str> = k.iter().map(|&e| p.label(e)).collect();
                w.push(format!(
                    "input {} at e,y,g,z|y',f,z',h = {}|{}|{}|{} ; {}|{}|{}|{}: sum {} expected {}",
                    t.fmt_quad(i),
                    l[0], l[1], l[2], l[3], l[4], l[5], l[6], l[7],
                    y, x
                ));
                break;
            }
        }
    }
    w
}

/// Comultiplicativity as the matrix identity `Δ_{D²}∘r = (r⊗r)∘Δ_{D²}`,
/// column by column. Witnesses name the failing input.
pub fn comultiplicativity_matrix(t: &LambdaTensor) -> Vec<String> {
    let n = t.basis.len();
    let field = t.field();
    let mut w = Vec::new();
    for j in 0..n * n {
        let lhs = delta2(&t.basis, t.map.column(j));
        let rhs = r_tensor_r(t, &delta2(&t.basis, &vec![(j, field.one())]));
        if lhs != rhs {
            w.push(format!("input {}", t.fmt_quad(t.quad(j))));
        }
    }
    w
}

/// Both implementations must agree on which inputs fail.
pub fn check_comultiplicativity(t: &LambdaTensor) -> Verdict {
    let by_index = comultiplicativity_index(t);
    let by_matrix = comultiplicativity_matrix(t);
    let inputs_of = |v: &[String]| -> Vec<String> {
        v.iter().map(|s| s.split(" at ").next().unwrap().to_string()).collect()
    };
    if inputs_of(&by_index) != by_matrix {
        return Verdict::fail(
            "comultiplicativity",
            format!("index and matrix paths disagree: {:?} vs {:?}", inputs_of(&by_index), by_matrix),
        );
    }
    Verdict::from_witnesses("comultiplicativity", by_index)
}

/// Nonzero entries satisfy `a^c ≤ g ≤ h ≤ b^c`, `^a c ≤ e ≤ f ≤ ^a d`.
pub fn check_support(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let p = t.poset();
    let w = t.entries().into_iter().filter_map(|(i, o, _)| {
        let [a, b, c, d] = i;
        let [e, f, g, h] = o;
        let ok = p.leq(s.r(a, c), g) && p.leq(h, s.r(b, c)) && p.leq(s.l(a, c), e) && p.leq(f, s.l(a, d));
        (!ok).then(|| t.fmt_entry(i, o))
    });
    Verdict::from_witnesses("support", w)
}

/// Factorization through every intermediate `(y,z)` for every in-support
/// quadruple.
pub fn check_factorization(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let p = t.poset();
    let mut w = Vec::new();
    for i in inputs(&t.basis) {
        let [a, b, c, d] = i;
        for o in support_region(t, s, i) {
            let [e, f, g, h] = o;
            let lhs = t.lam(i, o);
            for y in p.interval(e, f) {
                for z in p.interval(g, h) {
                    let (zc, ay) = (s.rinv(z, c), s.linv(a, y));
                    let rhs = t.lam([a, zc, c, ay], [e, y, g, z]) * t.lam([zc, b, ay, d], [y, f, z, h]);
                    if lhs != rhs {
                        w.push(format!(
                            "{} with y={}, z={}: {} vs product {}",
                            t.fmt_entry(i, o),
                            p.label(y),
                            p.label(z),
                            lhs,
                            rhs
                        ));
                    }
                }
            }
        }
    }
    Verdict::from_witnesses("factorization", w)
}

/// Lattice paths `(0,0) → (j,k)` with unit steps.
pub fn configurations(j: usize, k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut path = vec![(0, 0)];
    fn go(j: usize, k: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let (x, y) = *path.last().unwrap();
        if (x, y) == (j, k) {
            out.push(path.clone());
            return;
        }
        if x < j {
            path.push((x + 1, y));
            go(j, k, path, out);
            path.pop();
        }
        if y < k {
            path.push((x, y + 1));
            go(j, k, path, out);
            path.pop();
        }
    }
    go(j, k, &mut path, &mut out);
    out
}

fn is_saturated(p: &Poset, chain: &[usize], lo: usize, hi: usize) -> bool {
    chain.first() == Some(&lo) && chain.last() == Some(&hi) && chain.windows(2).all(|w| p.is_cover(w[0], w[1]))
}

/// The factors of the chain product as `(input, output)` keys:
/// two corners followed by one factor per configuration step.
pub fn chain_factors(
    t: &LambdaTensor,
    s: &SetSolution,
    i: Quad,
    o: Quad,
    ys: &[usize],
    zs: &[usize],
    config: &[(usize, usize)],
) -> Result<Vec<(Quad, Quad)>, BraidingError> {
    let p = t.poset();
    let [a, b, c, d] = i;
    let [e, f, g, h] = o;
    let ok = p.leq(e, f)
        && p.leq(g, h)
        && p.leq(s.r(a, c), g)
        && p.leq(h, s.r(b, c))
        && p.leq(s.l(a, c), e)
        && p.leq(f, s.l(a, d));
    if !ok {
        return Err(BraidingError::OutsideSupport(t.fmt_entry(i, o)));
    }
    if !is_saturated(p, ys, e, f) {
        return Err(BraidingError::InvalidChain(format!("{ys:?} is not a maximal chain of [e,f]")));
    }
    if !is_saturated(p, zs, g, h) {
        return Err(BraidingError::InvalidChain(format!("{zs:?} is not a maximal chain of [g,h]")));
    }
    let (j, k) = (ys.len() - 1, zs.len() - 1);
    let valid = config.first() == Some(&(0, 0))
        && config.last() == Some(&(j, k))
        && config.len() == j + k + 1
        && config
            .windows(2)
            .all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1 && (w[1].0 - w[0].0) + (w[1].1 - w[0].1) == 1);
    if !valid {
        return Err(BraidingError::InvalidConfiguration(format!("{config:?} for a {j}×{k} grid")));
    }
    let mut out = vec![
        ([a, s.rinv(g, c), c, s.linv(a, e)], [e, e, g, g]),
        ([s.rinv(h, c), b, s.linv(a, f), d], [f, f, h, h]),
    ];
    for w in config.windows(2) {
        let ((a0, b0), (a1, b1)) = (w[0], w[1]);
        let (y0, y1, z0, z1) = (ys[a0], ys[a1], zs[b0], zs[b1]);
        out.push(([s.rinv(z0, c), s.rinv(z1, c), s.linv(a, y0), s.linv(a, y1)], [y0, y1, z0, z1]));
    }
    Ok(out)
}

/// Value of the chain product for given chains and configuration.
pub fn chain_factor_value(
    t: &LambdaTensor,
    s: &SetSolution,
    i: Quad,
    o: Quad,
    ys: &[usize],
    zs: &[usize],
    config: &[(usize, usize)],
) -> Result<Scalar, BraidingError> {
    let factors = chain_factors(t, s, i, o, ys, zs, config)?;
    Ok(factors.iter().fold(t.field().one(), |acc, (fi, fo)| acc * t.lam(*fi, *fo)))
}

/// Every chain pair and configuration reproduces the entry.
pub fn check_configuration_independence(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let p = t.poset();
    let mut w = Vec::new();
    for i in inputs(&t.basis) {
        for o in support_region(t, s, i) {
            let [e, f, g, h] = o;
            let want = t.lam(i, o);
            for ys in p.maximal_chains(e, f).unwrap() {
                for zs in p.maximal_chains(g, h).unwrap() {
                    for cfg in configurations(ys.len() - 1, zs.len() - 1) {
                        let v = chain_factor_value(t, s, i, o, &ys, &zs, &cfg).unwrap();
                        if v != want {
                            w.push(format!("{} config {:?}: {} vs {}", t.fmt_entry(i, o), cfg, v, want));
                        }
                    }
                }
            }
        }
    }
    Verdict::from_witnesses("configuration-independence", w)
}

/// The composites `(C⊗σ)(Δ⊗C)` and `(τ⊗C)(C⊗Δ)` as maps on `D⊗D`.
pub fn nondegeneracy_maps(t: &LambdaTensor) -> (LinearMap, LinearMap) {
    let basis = &t.basis;
    let p = t.poset();
    let n = basis.len();
    let mut left = vec![Vec::new(); n * n];
    let mut right = vec![Vec::new(); n * n];
    for (j, i) in inputs(basis).into_iter().enumerate() {
        let [a, b, c, d] = i;
        // (a,b)⊗(c,d) ↦ Σ_p (a,p) ⊗ σ((p,b)⊗(c,d)), σ = (D⊗ε)∘r
        for pp in p.interval(a, b) {
            for ([e, f, g, h], v) in t.column([pp, b, c, d]) {
                if g == h {
                    left[j].push((basis.index(a, pp).unwrap() * n + basis.index(e, f).unwrap(), v));
                }
            }
        }
        // (a,b)⊗(c,d) ↦ Σ_q τ((a,b)⊗(c,q)) ⊗ (q,d), τ = (ε⊗D)∘r
        for q in p.interval(c, d) {
            for ([e, f, g, h], v) in t.column([a, b, c, q]) {
                if e == f {
                    right[j].push((basis.index(g, h).unwrap() * n + basis.index(q, d).unwrap(), v));
                }
            }
        }
    }
    (
        LinearMap::from_columns(t.field(), n, 2, left),
        LinearMap::from_columns(t.field(), n, 2, right),
    )
}

pub fn check_nondegeneracy(t: &LambdaTensor) -> Verdict {
    let (l, r) = nondegeneracy_maps(t);
    let mut w = Vec::new();
    if !l.is_invertible() {
        w.push("(C⊗σ)∘(Δ⊗C) is singular".to_string());
    }
    if !r.is_invertible() {
        w.push("(τ⊗C)∘(C⊗Δ) is singular".to_string());
    }
    Verdict::from_witnesses("nondegeneracy", w)
}

/// The graded unit `λ_{a|b|c|d}^{^a c|^a d|a^c|b^c}` of an input.
pub fn graded_unit_key(s: &SetSolution, i: Quad) -> Quad {
    let [a, b, c, d] = i;
    [s.l(a, c), s.l(a, d), s.r(a, c), s.r(b, c)]
}

pub fn check_graded_units(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let w = inputs(&t.basis).into_iter().filter_map(|i| {
        let o = graded_unit_key(s, i);
        t.lam(i, o).is_zero().then(|| format!("{} = 0", t.fmt_entry(i, o)))
    });
    Verdict::from_witnesses("graded-units", w)
}

/// Three-term shape of `r` on `(a,a)⊗(c,d)` with `c ≺ d`
/// and on `(a,b)⊗(c,c)` with `a ≺ b`.
pub fn check_cover_shapes(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let p = t.poset();
    let mut w = Vec::new();
    let mut shape = |i: Quad, unit: Quad, plus: Quad, minus: Quad, extra: Option<String>| {
        if let Some(x) = extra {
            w.push(format!("input {}: {x}", t.fmt_quad(i)));
        }
        let col = t.column(i);
        if col.iter().any(|(o, _)| *o != unit && *o != plus && *o != minus) {
            w.push(format!("input {}: term outside the three-term form", t.fmt_quad(i)));
        }
        if t.lam(i, unit).is_zero() {
            w.push(format!("input {}: leading coefficient is zero", t.fmt_quad(i)));
        }
        if t.lam(i, plus) != -t.lam(i, minus) {
            w.push(format!("input {}: β and −β terms do not match", t.fmt_quad(i)));
        }
    };
    for &(c, d) in p.covers() {
        for a in 0..p.len() {
            let (e, f, g) = (s.l(a, c), s.l(a, d), s.r(a, c));
            let mut extra = None;
            if s.r(a, d) != g {
                extra = Some(format!("a^c ≠ a^d"));
            } else if !p.is_cover(e, f) {
                extra = Some("^a d does not cover ^a c".to_string());
            }
            shape([a, a, c, d], [e, f, g, g], [e, e, g, g], [f, f, g, g], extra);
        }
    }
    for &(a, b) in p.covers() {
        for c in 0..p.len() {
            let (e, g, h) = (s.l(a, c), s.r(a, c), s.r(b, c));
            let mut extra = None;
            if s.l(b, c) != e {
                extra = Some("^a c ≠ ^b c".to_string());
            } else if !p.is_cover(g, h) {
                extra = Some("b^c does not cover a^c".to_string());
            }
            shape([a, b, c, c], [e, e, g, h], [e, e, g, g], [e, e, h, h], extra);
        }
    }
    Verdict::from_witnesses("cover-shapes", w)
}

/// For `e = ^a c`, `g = a^c`, `f ≥ e`, `h ≥ g` with positive
/// total height, `Σ λ_{a|p|c|q}^{e|e|g|g} λ_{p|h^c̄|q|^ā f}^{f|f|h|h} = 0`.
pub fn check_vanishing_sums(t: &LambdaTensor, s: &SetSolution) -> Verdict {
    let p = t.poset();
    let n = p.len();
    let mut w = Vec::new();
    for a in 0..n {
        for c in 0..n {
            let (e, g) = (s.l(a, c), s.r(a, c));
            for f in (0..n).filter(|&f| p.leq(e, f)) {
                for h in (0..n).filter(|&h| p.leq(g, h)) {
                    if p.h(e, f) + p.h(g, h) == 0 {
                        continue;
                    }
                    let (hc, af) = (s.rinv(h, c), s.linv(a, f));
                    let mut sum = t.field().zero();
                    for pp in p.interval(s.rinv(g, c), hc) {
                        for q in p.interval(s.linv(a, e), af) {
                            sum += &(t.lam([a, pp, c, q], [e, e, g, g]) * t.lam([pp, hc, q, af], [f, f, h, h]));
                        }
                    }
                    if !sum.is_zero() {
                        w.push(format!(
                            "a={}, c={}, f={}, h={}: sum {}",
                            p.label(a),
                            p.label(c),
                            p.label(f),
                            p.label(h),
                            sum
                        ));
                    }
                }
            }
        }
    }
    Verdict::from_witnesses("vanishing-sums", w)
}

/// Result of the full structural bundle.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub restriction: Option<SetSolution>,
    pub verdicts: Vec<Verdict>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn get(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| !v.passed).collect()
    }
}

/// Runs every structural check; nothing short-circuits. Checks that need the
/// restriction fail with a note when it cannot be extracted.
pub fn verify_structure(t: &LambdaTensor) -> StructureReport {
    let mut verdicts = Vec::new();
    let restriction = match extract_restriction(t) {
        Ok(s) => {
            verdicts.push(Verdict::pass("restriction"));
            Some(s)
        }
        Err(e) => {
            verdicts.push(Verdict::fail("restriction", e.to_string()));
            None
        }
    };
    let needs = |name: &str, f: &dyn Fn(&SetSolution) -> Verdict| match &restriction {
        Some(s) => f(s),
        None => Verdict::fail(name, "no valid restriction".to_string()),
    };
    verdicts.push(needs("support", &|s| check_support(t, s)));
    verdicts.push(needs("factorization", &|s| check_factorization(t, s)));
    verdicts.push(check_counit(t));
    verdicts.push(needs("graded-units", &|s| check_graded_units(t, s)));
    verdicts.push(check_comultiplicativity(t));
    verdicts.push(check_nondegeneracy(t));
    verdicts.push(needs("cover-shapes", &|s| check_cover_shapes(t, s)));
    verdicts.push(needs("vanishing-sums", &|s| check_vanishing_sums(t, s)));
    StructureReport { restriction, verdicts }
}

/// The data that determines a non-degenerate coalgebra automorphism:
/// corner entries of every `Λ_n^0` and all of `Λ_1^1`.
#[derive(Debug, Clone)]
pub struct SeedData {
    pub basis: Arc<IntervalBasis>,
    pub field: Field,
    pub restriction: SetSolution,
    pub ex: BTreeMap<(Quad, Quad), Scalar>,
    pub one_one: BTreeMap<(Quad, Quad), Scalar>,
}

/// Keys of `Ex(Λ_n^0)` (all n) and `Λ_1^1`, in basis order.
pub fn seed_keys(basis: &IntervalBasis, s: &SetSolution) -> (Vec<(Quad, Quad)>, Vec<(Quad, Quad)>) {
    let p = basis.poset();
    let mut ex = Vec::new();
    let mut one = Vec::new();
    for i in inputs(basis) {
        let [a, b, c, d] = i;
        let lo = [s.l(a, c), s.l(a, c), s.r(a, c), s.r(a, c)];
        let hi = [s.l(b, d), s.l(b, d), s.r(b, d), s.r(b, d)];
        ex.push((i, lo));
        if hi != lo {
            ex.push((i, hi));
        }
        if p.h(a, b) + p.h(c, d) == 1 {
            let (e0, e1, g0, g1) = (s.l(a, c), s.l(a, d), s.r(a, c), s.r(b, c));
            for e in p.interval(e0, e1) {
                for f in p.interval(e, e1) {
                    for g in p.interval(g0, g1) {
                        for h in p.interval(g, g1) {
                            if p.h(e, f) + p.h(g, h) == 1 {
                                one.push((i, [e, f, g, h]));
                            }
                        }
                    }
                }
            }
        }
    }
    (ex, one)
}

pub fn extract_seed(t: &LambdaTensor, s: &SetSolution) -> SeedData {
    let (ex, one) = seed_keys(&t.basis, s);
    SeedData {
        basis: t.basis.clone(),
        field: t.field(),
        restriction: s.clone(),
        ex: ex.into_iter().map(|(i, o)| ((i, o), t.lam(i, o))).collect(),
        one_one: one.into_iter().map(|(i, o)| ((i, o), t.lam(i, o))).collect(),
    }
}

/// Fills every in-support entry with the chain product and checks
/// that all chain pairs and configurations agree.
pub fn build_from_seed(seed: &SeedData) -> Result<LambdaTensor, BraidingError> {
    let s = &seed.restriction;
    let basis = &seed.basis;
    let p = basis.poset();
    // a scratch tensor lets us reuse the index formatting
    let scratch = LambdaTensor::new(basis.clone(), seed.field, std::iter::empty())?;
    let get = |k: (Quad, Quad), corner: bool| -> Result<Scalar, BraidingError> {
        let m = if corner { &seed.ex } else { &seed.one_one };
        m.get(&k)
            .cloned()
            .ok_or_else(|| BraidingError::MissingSeedValue(scratch.fmt_entry(k.0, k.1)))
    };
    let mut entries = Vec::new();
    for i in inputs(basis) {
        for o in support_region(&scratch, s, i) {
            let [e, f, g, h] = o;
            let mut value: Option<Scalar> = None;
            for ys in p.maximal_chains(e, f).unwrap() {
                for zs in p.maximal_chains(g, h).unwrap() {
                    for cfg in configurations(ys.len() - 1, zs.len() - 1) {
                        let factors = chain_factors(&scratch, s, i, o, &ys, &zs, &cfg)?;
                        let mut v = seed.field.one();
                        for (k, key) in factors.into_iter().enumerate() {
                            v *= &get(key, k < 2)?;
                        }
                        match &value {
                            None => value = Some(v),
                            Some(w) if *w != v => {
                                return Err(BraidingError::ConfigurationDependence(
                                    scratch.fmt_entry(i, o),
                                    w.to_string(),
                                    v.to_string(),
                                ))
                            }
                            _ => {}
                        }
                    }
                }
            }
            entries.push((i, o, value.unwrap()));
        }
    }
    LambdaTensor::new(basis.clone(), seed.field, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_on(p: Poset) -> LambdaTensor {
        let basis = Arc::new(IntervalBasis::new(p));
        let q = Field::Rational;
        let e: Vec<_> = inputs(&basis)
            .into_iter()
            .map(|[a, b, c, d]| ([a, b, c, d], [c, d, a, b], q.one()))
            .collect();
        LambdaTensor::new(basis, q, e).unwrap()
    }

    #[test]
    fn flip_restriction() {
        let t = flip_on(Poset::two_chain());
        let s = extract_restriction(&t).unwrap();
        assert_eq!(s.l(0, 1), 1);
        assert_eq!(s.r(0, 1), 0);
        assert!(check_set_solution(&s).is_ok());
        assert_eq!(
            apply_r(&t, (0, 0), (0, 1)).unwrap(),
            vec![([0, 1, 0, 0], Field::Rational.one())]
        );
    }

    #[test]
    fn flip_passes_everything() {
        let t = flip_on(Poset::vee());
        let r = verify_structure(&t);
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn coefficient_two_on_group_like_is_rejected() {
        let t = flip_on(Poset::two_chain());
        let bad = t.with_entry([0, 0, 0, 0], [0, 0, 0, 0], Field::Rational.int(2)).unwrap();
        assert!(matches!(extract_restriction(&bad), Err(BraidingError::NotGroupLike(..))));
    }

    #[test]
    fn configurations_count() {
        assert_eq!(configurations(0, 0), vec![vec![(0, 0)]]);
        assert_eq!(configurations(1, 1).len(), 2);
        assert_eq!(configurations(2, 2).len(), 6);
    }

    #[test]
    fn flip_seed_round_trip() {
        let t = flip_on(Poset::chain(3));
        let s = extract_restriction(&t).unwrap();
        let rebuilt = build_from_seed(&extract_seed(&t, &s)).unwrap();
        assert_eq!(rebuilt, t);
    }

    #[test]
    fn non_solution_permutation() {
        // ^a c = c, a^u swaps and a^v fixes: (a^u)^v ≠ (a^v)^v
        let p = Poset::from_cover_relations::<&str>(&["u", "v"], &[]).unwrap();
        let s = SetSolution::new(p, vec![vec![0, 1], vec![0, 1]], vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(check_set_solution(&s).unwrap_err().3, 2);
    }
}
