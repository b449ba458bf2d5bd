//! Brute-force oracles: exhaustive enumeration of braidings on tiny posets
//! over small prime fields, and randomized sweeps of the families.
//!
//! The pruned search enumerates only the seed data (corner entries and
//! `Λ_1^1`) that is not fixed by the restriction, forced by the counit, or
//! solvable from a product identity between two configurations. The
//! unpruned search enumerates every support entry and exists to validate
//! the pruning.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::braidcheck::residual_is_zero;
use crate::braiding::{
    build_from_seed, chain_factors, check_set_solution, configurations, inputs, seed_keys, support_region,
    verify_structure, LambdaTensor, Quad, SeedData, SetSolution,
};
use crate::coalgebra::IntervalBasis;
use crate::families::{enumerate_instances, family_membership, generate, random_params, FamilyId, FamilyInstance};
use crate::poset::Poset;
use crate::scalars::{Field, Scalar};

pub const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space has {size} candidates, above the cap of {limit}")]
    CapExceeded { size: String, limit: u64 },
    #[error("exhaustive search needs a finite field, got {0}")]
    InfiniteField(Field),
    #[error("restriction is not a non-degenerate set-theoretic solution")]
    BadRestriction,
}

#[derive(Debug, Clone)]
pub enum RestrictionMode {
    Fixed(SetSolution),
    /// Every restriction allowed by the order-automorphism criterion.
    EnumerateAll,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub poset: Poset,
    pub field: Field,
    pub restriction: RestrictionMode,
    pub pruning: bool,
    pub limit: u64,
}

impl SearchSpec {
    /// Pruned search with the flip restriction and the default cap.
    pub fn flip(poset: Poset, field: Field) -> SearchSpec {
        SearchSpec {
            restriction: RestrictionMode::Fixed(SetSolution::flip(poset.clone())),
            poset,
            field,
            pruning: true,
            limit: DEFAULT_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    /// Index of the restriction in the enumeration and of the candidate
    /// within its space.
    pub restriction: usize,
    pub candidate: u64,
    pub tensor: LambdaTensor,
    pub matches: Vec<FamilyInstance>,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub poset: Poset,
    pub field: Field,
    pub pruned: bool,
    pub restrictions: usize,
    /// Free coordinates per restriction.
    pub free_coordinates: Vec<usize>,
    pub candidates: u64,
    pub solutions: Vec<CensusEntry>,
}

impl Census {
    /// Solutions that matched at least one family.
    pub fn covered(&self) -> usize {
        self.solutions.iter().filter(|e| !e.matches.is_empty()).count()
    }

    pub fn contains(&self, t: &LambdaTensor) -> bool {
        self.solutions.iter().any(|e| e.tensor == *t)
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} candidates over {}, {} solutions, {} matched by a family",
            self.candidates,
            self.field,
            self.solutions.len(),
            self.covered()
        )
    }
}

/// Each key's value is either pinned, enumerated, or derived by a rule.
#[derive(Debug, Clone)]
enum Rule {
    /// `key = target − Σ Π terms`, from the counit on one input.
    Counit {
        key: usize,
        target: Scalar,
        terms: Vec<Vec<usize>>,
    },
    /// `key = Π num / Π den`, from two configurations of one entry.
    Ratio { key: usize, num: Vec<usize>, den: Vec<usize> },
}

impl Rule {
    fn key(&self) -> usize {
        match self {
            Rule::Counit { key, .. } | Rule::Ratio { key, .. } => *key,
        }
    }

    fn deps(&self) -> Vec<usize> {
        match self {
            Rule::Counit { terms, .. } => terms.iter().flatten().copied().collect(),
            Rule::Ratio { num, den, .. } => num.iter().chain(den).copied().collect(),
        }
    }
}

/// The pruned coordinate system for one restriction.
#[derive(Debug, Clone)]
pub struct Parametrization {
    basis: Arc<IntervalBasis>,
    field: Field,
    restriction: SetSolution,
    keys: Vec<(Quad, Quad)>,
    n_ex: usize,
    fixed: Vec<bool>,
    free: Vec<usize>,
    rules: Vec<Rule>,
}

fn group_like(q: Quad) -> bool {
    q[0] == q[1] && q[2] == q[3]
}

/// Multiset difference of two sorted monomials.
fn cancel(l: &[usize], r: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < l.len() || j < r.len() {
        match (l.get(i), r.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                a.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                a.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                b.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (a, b)
}

impl Parametrization {
    pub fn new(basis: Arc<IntervalBasis>, field: Field, s: SetSolution) -> Parametrization {
        let (ex, one) = seed_keys(&basis, &s);
        let n_ex = ex.len();
        let keys: Vec<(Quad, Quad)> = ex.into_iter().chain(one).collect();
        let index: HashMap<(Quad, Quad), usize> = keys.iter().enumerate().map(|(k, q)| (*q, k)).collect();
        let fixed: Vec<bool> = keys.iter().enumerate().map(|(k, (i, _))| k < n_ex && group_like(*i)).collect();
        let scratch = LambdaTensor::new(basis.clone(), field, std::iter::empty()).expect("empty tensor");
        let p = basis.poset().clone();

        // every in-support entry as a list of monomials over non-fixed keys
        let mut cells: Vec<(Quad, Quad, Vec<Vec<usize>>)> = Vec::new();
        for i in inputs(&basis) {
            for o in support_region(&scratch, &s, i) {
                let [e, f, g, h] = o;
                let mut monos = Vec::new();
                for ys in p.maximal_chains(e, f).expect("interval") {
                    for zs in p.maximal_chains(g, h).expect("interval") {
                        for cfg in configurations(ys.len() - 1, zs.len() - 1) {
                            let fs = chain_factors(&scratch, &s, i, o, &ys, &zs, &cfg).expect("in support");
                            let mut m: Vec<usize> = fs.iter().map(|k| index[k]).filter(|&k| !fixed[k]).collect();
                            m.sort_unstable();
                            if !monos.contains(&m) {
                                monos.push(m);
                            }
                        }
                    }
                }
                cells.push((i, o, monos));
            }
        }

        let mut rules: Vec<Rule> = Vec::new();
        let mut dependent: HashMap<usize, usize> = HashMap::new();
        // true when `key` is reachable from any of `deps` through rules
        let reaches = |rules: &[Rule], dependent: &HashMap<usize, usize>, deps: &[usize], key: usize| {
            let mut stack: Vec<usize> = deps.to_vec();
            let mut seen = HashSet::new();
            while let Some(d) = stack.pop() {
                if d == key {
                    return true;
                }
                if seen.insert(d) {
                    if let Some(&r) = dependent.get(&d) {
                        stack.extend(rules[r].deps());
                    }
                }
            }
            false
        };

        for i in inputs(&basis) {
            if group_like(i) {
                continue;
            }
            let gl: Vec<&Vec<usize>> = cells
                .iter()
                .filter(|(ci, o, _)| *ci == i && group_like(*o))
                .map(|(_, _, m)| &m[0])
                .collect();
            let pick = gl
                .iter()
                .filter(|m| m.len() == 1 && !dependent.contains_key(&m[0]))
                .map(|m| m[0])
                .filter(|&k| gl.iter().filter(|m| m.contains(&k)).count() == 1)
                .max();
            if let Some(k) = pick {
                let terms: Vec<Vec<usize>> = gl.iter().filter(|m| m.as_slice() != [k]).map(|m| m.to_vec()).collect();
                let deps: Vec<usize> = terms.iter().flatten().copied().collect();
                if !reaches(&rules, &dependent, &deps, k) {
                    dependent.insert(k, rules.len());
                    rules.push(Rule::Counit {
                        key: k,
                        target: field.zero(),
                        terms,
                    });
                }
            }
        }

        for (_, _, monos) in &cells {
            for m in &monos[1..] {
                let (l, r) = cancel(&monos[0], m);
                let all: Vec<usize> = l.iter().chain(&r).copied().collect();
                let pick = all
                    .iter()
                    .copied()
                    .filter(|k| all.iter().filter(|x| *x == k).count() == 1 && !dependent.contains_key(k))
                    .max();
                let Some(k) = pick else { continue };
                let (own, other) = if l.contains(&k) { (&l, &r) } else { (&r, &l) };
                let den: Vec<usize> = own.iter().copied().filter(|&x| x != k).collect();
                let num = other.clone();
                let deps: Vec<usize> = num.iter().chain(&den).copied().collect();
                if reaches(&rules, &dependent, &deps, k) {
                    continue;
                }
                dependent.insert(k, rules.len());
                rules.push(Rule::Ratio { key: k, num, den });
            }
        }

        // evaluation order: a rule runs once everything it reads is known
        let mut ordered = Vec::new();
        let mut known: HashSet<usize> = (0..keys.len()).filter(|k| !dependent.contains_key(k)).collect();
        let mut pending = rules;
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for r in pending {
                if r.deps().iter().all(|d| known.contains(d)) {
                    known.insert(r.key());
                    ordered.push(r);
                } else {
                    rest.push(r);
                }
            }
            pending = rest;
            assert!(pending.len() < before, "cyclic rules survived the reachability check");
        }

        let free = (0..keys.len()).filter(|k| !fixed[*k] && !dependent.contains_key(k)).collect();
        Parametrization {
            basis,
            field,
            restriction: s,
            keys,
            n_ex,
            fixed,
            free,
            rules: ordered,
        }
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// The enumerated keys as `(input, output)` quadruples.
    pub fn free_keys(&self) -> Vec<(Quad, Quad)> {
        self.free.iter().map(|&k| self.keys[k]).collect()
    }

    /// Seed data for one assignment of the free keys; `None` when a rule
    /// would divide by zero.
    pub fn seed(&self, values: &[Scalar]) -> Option<SeedData> {
        let f = self.field;
        let mut v: Vec<Option<Scalar>> = vec![None; self.keys.len()];
        for (k, fx) in self.fixed.iter().enumerate() {
            if *fx {
                v[k] = Some(f.one());
            }
        }
        for (&k, x) in self.free.iter().zip(values) {
            v[k] = Some(x.clone());
        }
        let prod = |v: &[Option<Scalar>], m: &[usize]| m.iter().fold(f.one(), |acc, &k| acc * v[k].as_ref().expect("ordered"));
        for r in &self.rules {
            let x = match r {
                Rule::Counit { target, terms, .. } => {
                    terms.iter().fold(target.clone(), |acc, m| acc - prod(&v, m))
                }
                Rule::Ratio { num, den, .. } => {
                    let d = prod(&v, den);
                    if d.is_zero() {
                        return None;
                    }
                    prod(&v, num) / d
                }
            };
            v[r.key()] = Some(x);
        }
        let mut ex = BTreeMap::new();
        let mut one_one = BTreeMap::new();
        for (k, key) in self.keys.iter().enumerate() {
            let x = v[k].clone().expect("every key resolved");
            if k < self.n_ex {
                ex.insert(*key, x);
            } else {
                one_one.insert(*key, x);
            }
        }
        Some(SeedData {
            basis: self.basis.clone(),
            field: f,
            restriction: self.restriction.clone(),
            ex,
            one_one,
        })
    }
}

/// Restrictions whose translations are order automorphisms constant on
/// connected components and that solve the set-theoretic braid equation.
pub fn admissible_restrictions(p: &Poset) -> Vec<SetSolution> {
    let auts = p.automorphisms();
    let comps = p.connected_components().len();
    let n = p.len();
    // one automorphism per component
    let total = auts.len().pow(comps as u32);
    let choices: Vec<Vec<&Vec<usize>>> = (0..total)
        .map(|code| {
            let mut c = code;
            (0..comps)
                .map(|_| {
                    let a = &auts[c % auts.len()];
                    c /= auts.len();
                    a
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for l in &choices {
        for r in &choices {
            let left = (0..n).map(|a| l[p.component_of(a)].clone()).collect();
            let right = (0..n).map(|a| (0..n).map(|c| r[p.component_of(c)][a]).collect()).collect();
            if let Ok(s) = SetSolution::new(p.clone(), left, right) {
                if s.check_translations().is_ok() && check_set_solution(&s).is_ok() {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn space_size(q: u64, free: usize) -> Option<u64> {
    q.checked_pow(free as u32)
}

fn digits(mut code: u64, elems: &[Scalar], len: usize) -> Vec<Scalar> {
    let q = elems.len() as u64;
    (0..len)
        .map(|_| {
            let d = (code % q) as usize;
            code /= q;
            elems[d].clone()
        })
        .collect()
}

fn is_solution(t: &LambdaTensor) -> bool {
    residual_is_zero(t) && verify_structure(t).passed()
}

/// All non-degenerate braidings for the spec, with family matches.
pub fn exhaustive_search(spec: &SearchSpec) -> Result<Census, SearchError> {
    let elems = spec.field.elements().ok_or(SearchError::InfiniteField(spec.field))?;
    let q = elems.len() as u64;
    let restrictions = match &spec.restriction {
        RestrictionMode::Fixed(s) => {
            if check_set_solution(s).is_err() || s.check_translations().is_err() {
                return Err(SearchError::BadRestriction);
            }
            vec![s.clone()]
        }
        RestrictionMode::EnumerateAll => admissible_restrictions(&spec.poset),
    };
    let basis = Arc::new(IntervalBasis::new(spec.poset.clone()));

    let plans: Vec<Plan> = restrictions
        .iter()
        .map(|s| {
            if spec.pruning {
                Plan::Pruned(Parametrization::new(basis.clone(), spec.field, s.clone()))
            } else {
                Plan::Raw(RawPlan::new(basis.clone(), spec.field, s))
            }
        })
        .collect();
    let free: Vec<usize> = plans.iter().map(Plan::free_count).collect();
    let mut total: u64 = 0;
    for &k in &free {
        let sz = space_size(q, k).ok_or_else(|| SearchError::CapExceeded {
            size: format!("{q}^{k}"),
            limit: spec.limit,
        })?;
        total = total.checked_add(sz).ok_or_else(|| SearchError::CapExceeded {
            size: format!("more than {}", u64::MAX),
            limit: spec.limit,
        })?;
    }
    if total > spec.limit {
        let size = if free.len() == 1 {
            format!("{q}^{} = {total}", free[0])
        } else {
            total.to_string()
        };
        return Err(SearchError::CapExceeded { size, limit: spec.limit });
    }

    let mut solutions = Vec::new();
    for (ri, plan) in plans.iter().enumerate() {
        let size = space_size(q, free[ri]).expect("checked above");
        let mut found: Vec<(u64, LambdaTensor)> = (0..size)
            .into_par_iter()
            .filter_map(|code| plan.candidate(code, &elems).filter(is_solution).map(|t| (code, t)))
            .collect();
        found.sort_by_key(|(c, _)| *c);
        for (code, t) in found {
            let matches = family_membership(&t);
            solutions.push(CensusEntry {
                restriction: ri,
                candidate: code,
                tensor: t,
                matches,
            });
        }
    }
    Ok(Census {
        poset: spec.poset.clone(),
        field: spec.field,
        pruned: spec.pruning,
        restrictions: restrictions.len(),
        free_coordinates: free,
        candidates: total,
        solutions,
    })
}

enum Plan {
    Pruned(Parametrization),
    Raw(RawPlan),
}

impl Plan {
    fn free_count(&self) -> usize {
        match self {
            Plan::Pruned(p) => p.free_count(),
            Plan::Raw(r) => r.free.len(),
        }
    }

    fn candidate(&self, code: u64, elems: &[Scalar]) -> Option<LambdaTensor> {
        match self {
            Plan::Pruned(p) => {
                let vals = digits(code, elems, p.free_count());
                build_from_seed(&p.seed(&vals)?).ok()
            }
            Plan::Raw(r) => r.candidate(code, elems),
        }
    }
}

/// Every support entry as a coordinate; the group-like corners are pinned
/// to 1 and the counit is checked before any tensor is built.
struct RawPlan {
    basis: Arc<IntervalBasis>,
    field: Field,
    pinned: Vec<(Quad, Quad)>,
    free: Vec<(Quad, Quad)>,
    /// Per non-group-like input, positions in `free` of its group-like outputs.
    counit: Vec<Vec<usize>>,
}

impl RawPlan {
    fn new(basis: Arc<IntervalBasis>, field: Field, s: &SetSolution) -> RawPlan {
        let scratch = LambdaTensor::new(basis.clone(), field, std::iter::empty()).expect("empty tensor");
        let mut pinned = Vec::new();
        let mut free = Vec::new();
        let mut counit = Vec::new();
        for i in inputs(&basis) {
            let region = support_region(&scratch, s, i);
            if group_like(i) {
                let [a, _, c, _] = i;
                let (e, g) = (s.l(a, c), s.r(a, c));
                pinned.push((i, [e, e, g, g]));
                continue;
            }
            let mut gl = Vec::new();
            for o in region {
                if group_like(o) {
                    gl.push(free.len());
                }
                free.push((i, o));
            }
            counit.push(gl);
        }
        RawPlan {
            basis,
            field,
            pinned,
            free,
            counit,
        }
    }

    fn candidate(&self, code: u64, elems: &[Scalar]) -> Option<LambdaTensor> {
        let vals = digits(code, elems, self.free.len());
        for gl in &self.counit {
            let sum = gl.iter().fold(self.field.zero(), |acc, &k| acc + &vals[k]);
            if !sum.is_zero() {
                return None;
            }
        }
        let one = self.field.one();
        let entries = self
            .pinned
            .iter()
            .map(|&(i, o)| (i, o, one.clone()))
            .chain(self.free.iter().zip(vals).map(|(&(i, o), v)| (i, o, v)));
        LambdaTensor::new(self.basis.clone(), self.field, entries).ok()
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub family: FamilyId,
    pub field: Field,
    pub seed: u64,
    pub requested: usize,
    /// Set when the valid parameter set was small enough to walk in full.
    pub exhaustive: bool,
    pub checked: usize,
    pub passed: usize,
    pub counterexamples: Vec<String>,
    pub note: Option<String>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.checked > 0 && self.passed == self.checked
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.exhaustive { "exhaustive" } else { "random" };
        write!(f, "{} over {}: {}/{} pass ({how})", self.family, self.field, self.passed, self.checked)?;
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        for c in &self.counterexamples {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Checks one instance; `Err` carries the first failure verbatim.
pub fn check_instance(inst: &FamilyInstance) -> Result<LambdaTensor, String> {
    let t = generate(inst).map_err(|e| e.to_string())?;
    if let Some(w) = crate::braidcheck::residual_witness(&t) {
        return Err(format!(
            "{inst}: residual {} at input {:?}, output {:?}",
            w.coefficient, w.input, w.output
        ));
    }
    let rep = verify_structure(&t);
    if let Some(v) = rep.failures().first() {
        return Err(format!("{inst}: {v}"));
    }
    Ok(t)
}

/// Draws parameters, realizes, verifies structure and residual. Over a
/// finite field whose valid parameter set has at most `draws` members the
/// whole set is checked instead.
pub fn random_family_sweep(id: FamilyId, draws: usize, field: Field, seed: u64) -> SweepReport {
    let mut report = SweepReport {
        family: id,
        field,
        seed,
        requested: draws,
        exhaustive: false,
        checked: 0,
        passed: 0,
        counterexamples: Vec::new(),
        note: None,
    };
    let insts: Vec<FamilyInstance> = match enumerate_instances(id, field, 100_000) {
        Some(all) if all.len() <= draws => {
            report.exhaustive = true;
            if all.is_empty() {
                report.note = Some(format!("no valid parameters exist in {field}"));
            }
            all
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = Vec::with_capacity(draws);
            for _ in 0..draws {
                match random_params(id, field, &mut rng) {
                    Ok(i) => v.push(i),
                    Err(e) => {
                        report.note = Some(e.to_string());
                        break;
                    }
                }
            }
            v
        }
    };
    let results: Vec<Result<LambdaTensor, String>> = insts.par_iter().map(check_instance).collect();
    report.checked = results.len();
    for r in results {
        match r {
            Ok(_) => report.passed += 1,
            Err(e) => report.counterexamples.push(e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_eight_free_coordinates() {
        let p = Poset::two_chain();
        let basis = Arc::new(IntervalBasis::new(p.clone()));
        let par = Parametrization::new(basis, Field::prime(2).unwrap(), SetSolution::flip(p));
        assert_eq!(par.free_count(), 8);
    }

    #[test]
    fn point_has_only_identity() {
        let spec = SearchSpec::flip(Poset::chain(1), Field::prime(3).unwrap());
        let c = exhaustive_search(&spec).unwrap();
        assert_eq!(c.candidates, 1);
        assert_eq!(c.solutions.len(), 1);
    }

    #[test]
    fn cap_refuses() {
        let mut spec = SearchSpec::flip(Poset::vee(), Field::prime(5).unwrap());
        spec.pruning = false;
        match exhaustive_search(&spec) {
            Err(SearchError::CapExceeded { size, .. }) => assert!(size.starts_with("5^")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cancel_multisets() {
        assert_eq!(cancel(&[1, 2, 2, 5], &[2, 3, 5]), (vec![1, 2], vec![3]));
    }
}
