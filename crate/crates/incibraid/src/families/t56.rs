//! The ten families on `x < y` with flip restriction.

use std::sync::Arc;

use rand::Rng;

use super::{dense_entry, position, realize, same_basis, FamilyError, FamilyId, FamilyInstance, Symbols};
use crate::braiding::LambdaTensor;
use crate::coalgebra::IntervalBasis;
use crate::poset::Poset;
use crate::scalars::{Field, Scalar};
use FamilyId::*;

/// General shape of the 9×9 matrix, (row, col, symbol), 1-based, rows =
/// outputs. `A1 = α₁α₃`, `B₁ = α₂β₄`, `B₂ = α₁β₃`, `B₃ = −α₄β₂`,
/// `B₄ = −α₃β₁`, `Γ₂ = −β₂β₄`, `Γ₃ = −β₁β₃`, `Γ₄ = −(Γ₁+Γ₂+Γ₃)`.
pub const T56_GRID: [(usize, usize, &str); 25] = [
    (1, 1, "1"),
    (1, 2, "b1"),
    (1, 4, "b2"),
    (1, 5, "G1"),
    (2, 4, "a2"),
    (2, 5, "B1"),
    (3, 4, "-b2"),
    (3, 5, "G2"),
    (3, 7, "1"),
    (3, 8, "b4"),
    (4, 2, "a1"),
    (4, 5, "B2"),
    (5, 5, "A1"),
    (6, 5, "B3"),
    (6, 8, "a4"),
    (7, 2, "-b1"),
    (7, 3, "1"),
    (7, 5, "G3"),
    (7, 6, "b3"),
    (8, 5, "B4"),
    (8, 6, "a3"),
    (9, 5, "G4"),
    (9, 6, "-b3"),
    (9, 8, "-b4"),
    (9, 9, "1"),
];

/// The free coordinates `α₁..α₄, β₁..β₄, Γ₁` read off a 9×9 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T56Coordinates {
    pub alpha: [Scalar; 4],
    pub beta: [Scalar; 4],
    pub gamma1: Scalar,
}

impl T56Coordinates {
    /// The `C` with `αᵢ = 1 + Cβᵢ` for every `i`, if one exists. When all
    /// `βᵢ` vanish any `C` works provided every `αᵢ = 1`; zero is returned.
    pub fn common_constant(&self) -> Option<Scalar> {
        let f = self.gamma1.field();
        let c = match self.beta.iter().position(|b| !b.is_zero()) {
            Some(i) => (&self.alpha[i] - f.one()) / &self.beta[i],
            None => f.zero(),
        };
        (0..4)
            .all(|i| self.alpha[i] == f.one() + &c * &self.beta[i])
            .then_some(c)
    }
}

/// Reads the coordinates, or `None` off the two-element chain.
pub fn t56_coordinates(t: &LambdaTensor) -> Option<T56Coordinates> {
    if !same_basis(t, &Poset::two_chain()) {
        return None;
    }
    let at = |sym: &str| {
        let (r, c) = position(&T56_GRID, sym);
        dense_entry(t, r, c)
    };
    Some(T56Coordinates {
        alpha: ["a1", "a2", "a3", "a4"].map(at),
        beta: ["b1", "b2", "b3", "b4"].map(at),
        gamma1: at("G1"),
    })
}

fn basis() -> Arc<IntervalBasis> {
    Arc::new(IntervalBasis::new(Poset::two_chain()))
}

/// Realizes a T56 family on `x < y`.
pub fn theorem56_matrix(inst: &FamilyInstance) -> Result<LambdaTensor, FamilyError> {
    inst.require(inst.family_id.is_t56(), "family on x < y")?;
    inst.check_names()?;
    let f = inst.field;
    let (zero, one, two) = (f.zero(), f.one(), f.int(2));
    let p = |k: &str| inst.get(k);
    let ones = || [one.clone(), one.clone(), one.clone(), one.clone()];
    let (a, b, g1): ([Scalar; 4], [Scalar; 4], Scalar) = match inst.family_id {
        T56_1 => {
            let (a1, a2, a3) = (p("alpha1"), p("alpha2"), p("alpha3"));
            inst.require(!a1.is_zero() && !a2.is_zero() && !a3.is_zero(), "α₁, α₂, α₃ ∈ K^×")?;
            let a4 = &a1 * &a3 / &a2;
            ([a1, a2, a3, a4], [zero.clone(), zero.clone(), zero.clone(), zero.clone()], zero.clone())
        }
        T56_2a | T56_2b => {
            let a1 = p("alpha1");
            inst.require(a1 == one || a1 == -&one, "α₁ = ±1")?;
            let g1 = p("Gamma1");
            inst.require(!g1.is_zero(), "Γ₁ ∈ K^×")?;
            let a3 = if inst.family_id == T56_2a { a1.clone() } else { -&a1 };
            let z = zero.clone();
            ([a1.clone(), a1, a3.clone(), a3], [z.clone(), z.clone(), z.clone(), z], g1)
        }
        T56_3a => {
            let (b1, b2) = (p("beta1"), p("beta2"));
            inst.require(!(b1.is_zero() && b2.is_zero()), "(β₁, β₂) ≠ (0, 0)")?;
            (ones(), [b1.clone(), b2.clone(), b2, b1], p("Gamma1"))
        }
        T56_3b => {
            let (b1, b3) = (p("beta1"), p("beta3"));
            inst.require(!(&b1 + &b3).is_zero(), "β₁ + β₃ ≠ 0")?;
            let g1 = &b1 * &b3;
            (ones(), [b1.clone(), -&b1, b3.clone(), -&b3], g1)
        }
        T56_4a_i => {
            let (c, b2, b4) = (p("C"), p("beta2"), p("beta4"));
            inst.require(!c.is_zero(), "C ∈ K^×")?;
            inst.require(!(b2.is_zero() && b4.is_zero()), "(β₂, β₄) ≠ (0, 0)")?;
            let a2 = &one + &c * &b2;
            let b3 = &b2 + &a2 * &b4;
            let b = [zero.clone(), b2, b3, b4];
            inst.require(b.iter().all(|bi| &c * bi != -&one), "Cβᵢ ≠ −1 for all i")?;
            let a = b.clone().map(|bi| &one + &c * &bi);
            let g1 = &a2 * &b[3] / &c;
            (a, b, g1)
        }
        T56_4a_ii => {
            inst.odd_characteristic()?;
            let (g1, b4) = (p("Gamma1"), p("beta4"));
            inst.require(!b4.is_zero(), "β₄ ∈ K^×")?;
            inst.require(g1 != -(&b4 * &b4) / &two, "Γ₁ ∈ K∖{−β₄²/2}")?;
            let m = -&one;
            ([one.clone(), one.clone(), m.clone(), m], [zero.clone(), zero.clone(), b4.clone(), b4], g1)
        }
        T56_4b_i => {
            inst.odd_characteristic()?;
            let (b1, b4) = (p("beta1"), p("beta4"));
            inst.require(!b1.is_zero(), "β₁ ∈ K^×")?;
            inst.require(&b4 * &two != b1, "β₃, β₄ ∈ K∖{β₁/2}")?;
            let forced = &b1 * (&b1 + &b4) / &two;
            let g1 = match inst.opt("Gamma1") {
                Some(g) => {
                    let free = b4.is_zero() || b4 == b1;
                    inst.require(free || g == forced, "Γ₁ = β₁(β₁+β₄)/2 unless β₄ ∈ {0, β₁}")?;
                    g
                }
                None => forced,
            };
            let b = [b1.clone(), b1.clone(), b4.clone(), b4];
            let a = b.clone().map(|bi| &one - &two * &bi / &b1);
            (a, b, g1)
        }
        T56_4b_ii => {
            inst.odd_characteristic()?;
            let (b1, b2, b4) = (p("beta1"), p("beta2"), p("beta4"));
            inst.require(!b1.is_zero(), "β₁ ∈ K^×")?;
            inst.require(b2 != b1, "β₂ ∈ K∖{β₁}")?;
            let b3 = &two * &b2 * &b4 / &b1 + &b1 - &b2 - &b4;
            let g1 = (&b1 * &b1 - &b4 * &b1 + &two * &b2 * &b4) / &two;
            let b = [b1.clone(), b2, b3, b4];
            inst.require(b.iter().all(|bi| &two * bi != b1), "βᵢ ≠ β₁/2 for all i")?;
            let a = b.clone().map(|bi| &one - &two * &bi / &b1);
            (a, b, g1)
        }
        T56_4c => {
            let (c, b1, b2, b3) = (p("C"), p("beta1"), p("beta2"), p("beta3"));
            inst.require(!c.is_zero(), "C ∈ K^×")?;
            let bad = -(&one / &c);
            inst.require(!b1.is_zero() && b1 != bad, "β₁ ∈ K^×∖{−1/C}")?;
            inst.require(b2 != bad && b3 != bad, "β₂, β₃ ∈ K∖{−1/C}")?;
            let b4 = (&b1 - &b2 + &b3 + &b1 * &b3 * &c) / (&one + &b2 * &c);
            let b = [b1, b2, b3, b4];
            let a = b.clone().map(|bi| &one + &c * &bi);
            let g1 = (&b[2] * &a[0] - &b[1]) / &c;
            (a, b, g1)
        }
        _ => unreachable!(),
    };
    inst.require(a.iter().all(|x| !x.is_zero()), "αᵢ ∈ K^×")?;
    Ok(realize_t56(f, &a, &b, &g1))
}

/// Fills the general 9×9 shape from the free coordinates.
pub(crate) fn realize_t56(f: Field, a: &[Scalar; 4], b: &[Scalar; 4], g1: &Scalar) -> LambdaTensor {
    let mut s = Symbols::new(f, 4, 4, 1, 4);
    for i in 0..4 {
        s.a[i + 1] = a[i].clone();
        s.b[i + 1] = b[i].clone();
    }
    let (a1, a2, a3, a4) = (&a[0], &a[1], &a[2], &a[3]);
    let (b1, b2, b3, b4) = (&b[0], &b[1], &b[2], &b[3]);
    s.big_a[1] = a1 * a3;
    s.big_b[1] = a2 * b4;
    s.big_b[2] = a1 * b3;
    s.big_b[3] = -(a4 * b2);
    s.big_b[4] = -(a3 * b1);
    s.g[1] = g1.clone();
    s.g[2] = -(b2 * b4);
    s.g[3] = -(b1 * b3);
    s.g[4] = -(&s.g[1] + &s.g[2] + &s.g[3]);
    realize(basis(), f, &T56_GRID, &s)
}

/// Candidate instances read off `t`, one per family.
pub(crate) fn candidates(t: &LambdaTensor) -> Vec<FamilyInstance> {
    let Some(co) = t56_coordinates(t) else {
        return Vec::new();
    };
    let f = t.field();
    let [a1, a2, a3, _] = co.alpha.clone();
    let [b1, b2, b3, b4] = co.beta.clone();
    let g1 = co.gamma1.clone();
    let inst = |id| FamilyInstance::new(id, f);
    let mut out = vec![
        inst(T56_1).with("alpha1", a1.clone()).with("alpha2", a2).with("alpha3", a3),
        inst(T56_2a).with("alpha1", a1.clone()).with("Gamma1", g1.clone()),
        inst(T56_2b).with("alpha1", a1).with("Gamma1", g1.clone()),
        inst(T56_3a).with("beta1", b1.clone()).with("beta2", b2.clone()).with("Gamma1", g1.clone()),
        inst(T56_3b).with("beta1", b1.clone()).with("beta3", b3.clone()),
        inst(T56_4a_ii).with("Gamma1", g1.clone()).with("beta4", b4.clone()),
        inst(T56_4b_i).with("beta1", b1.clone()).with("beta4", b4.clone()).with("Gamma1", g1),
        inst(T56_4b_ii).with("beta1", b1.clone()).with("beta2", b2.clone()).with("beta4", b4.clone()),
    ];
    if let Some(c) = co.common_constant() {
        out.push(inst(T56_4a_i).with("C", c.clone()).with("beta2", b2.clone()).with("beta4", b4));
        out.push(inst(T56_4c).with("C", c).with("beta1", b1).with("beta2", b2).with("beta3", b3));
    }
    out.sort_by_key(|i| i.family_id);
    out
}

/// One unvalidated draw; `random_params` rejects the invalid ones.
pub(crate) fn draw<R: Rng + ?Sized>(id: FamilyId, f: Field, rng: &mut R) -> FamilyInstance {
    let inst = FamilyInstance::new(id, f);
    let sel: u32 = rng.gen_range(0..4);
    let mut s = |nz: bool| f.sample(rng, nz);
    match id {
        T56_1 => inst.with("alpha1", s(true)).with("alpha2", s(true)).with("alpha3", s(true)),
        T56_2a | T56_2b => {
            let sign = if sel % 2 == 0 { f.one() } else { -f.one() };
            inst.with("alpha1", sign).with("Gamma1", s(true))
        }
        T56_3a => inst.with("beta1", s(false)).with("beta2", s(false)).with("Gamma1", s(false)),
        T56_3b => inst.with("beta1", s(false)).with("beta3", s(false)),
        T56_4a_i => inst.with("C", s(true)).with("beta2", s(false)).with("beta4", s(false)),
        T56_4a_ii => inst.with("Gamma1", s(false)).with("beta4", s(true)),
        T56_4b_i => {
            let b1 = s(true);
            // exercise the free-Γ₁ branches β₄ ∈ {0, β₁} now and then
            match sel {
                0 => inst.with("beta1", b1).with("beta4", f.zero()).with("Gamma1", s(false)),
                1 => inst.with("beta1", b1.clone()).with("beta4", b1).with("Gamma1", s(false)),
                _ => inst.with("beta1", b1).with("beta4", s(false)),
            }
        }
        T56_4b_ii => inst.with("beta1", s(true)).with("beta2", s(false)).with("beta4", s(false)),
        T56_4c => inst.with("C", s(true)).with("beta1", s(true)).with("beta2", s(false)).with("beta3", s(false)),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item1_alpha4() {
        let inst = FamilyInstance::with_ints(T56_1, Field::Rational, &[("alpha1", 2), ("alpha2", 1), ("alpha3", 3)]);
        let t = theorem56_matrix(&inst).unwrap();
        let co = t56_coordinates(&t).unwrap();
        assert_eq!(co.alpha[3], Field::Rational.int(6));
        // center entry A = α₁α₃
        assert_eq!(dense_entry(&t, 4, 4), Field::Rational.int(6));
    }

    #[test]
    fn item3_first_gamma4() {
        let inst = FamilyInstance::with_ints(T56_3a, Field::Rational, &[("beta1", 1), ("beta2", 2), ("Gamma1", 0)]);
        let t = theorem56_matrix(&inst).unwrap();
        assert_eq!(dense_entry(&t, 8, 4), Field::Rational.int(4));
    }

    #[test]
    fn item3_second_rejects() {
        let inst = FamilyInstance::with_ints(T56_3b, Field::Rational, &[("beta1", 0), ("beta3", 0)]);
        let e = theorem56_matrix(&inst).unwrap_err();
        assert!(e.to_string().contains("β₁ + β₃ ≠ 0"), "{e}");
    }

    #[test]
    fn item4a_second_excluded_gamma() {
        let q = Field::Rational;
        let inst = FamilyInstance::new(T56_4a_ii, q)
            .with("beta4", q.int(2))
            .with("Gamma1", q.int(-2));
        let e = theorem56_matrix(&inst).unwrap_err();
        assert!(e.to_string().contains("Γ₁ ∈ K∖{−β₄²/2}"), "{e}");
    }
}
