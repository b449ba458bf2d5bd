//! The eight families on `x ≺ y ≻ z` whose restriction is the constant
//! `x ↔ z` twist on both sides.

use std::sync::Arc;

use rand::Rng;

use super::{dense_entry, position, realize, same_basis, FamilyError, FamilyId, FamilyInstance, Symbols};
use crate::braiding::LambdaTensor;
use crate::coalgebra::IntervalBasis;
use crate::poset::Poset;
use crate::scalars::{Field, Scalar};
use FamilyId::*;

/// The 25×25 shape, (row, col, symbol), 1-based, rows = outputs.
pub const FIGURE1: [(usize, usize, &str); 81] = [
    (1, 19, "G13"),
    (1, 20, "b11"),
    (1, 24, "b12"),
    (1, 25, "1"),
    (2, 19, "B13"),
    (2, 20, "a11"),
    (3, 9, "G5"),
    (3, 10, "-b5"),
    (3, 14, "b9"),
    (3, 15, "1"),
    (3, 19, "G14"),
    (3, 20, "-b11"),
    (4, 9, "B5"),
    (4, 10, "a5"),
    (5, 4, "b7"),
    (5, 5, "1"),
    (5, 9, "G6"),
    (5, 10, "b5"),
    (6, 19, "B14"),
    (6, 24, "a12"),
    (7, 19, "A4"),
    (8, 9, "B6"),
    (8, 14, "a9"),
    (8, 19, "B15"),
    (9, 9, "A2"),
    (10, 4, "a7"),
    (10, 9, "B7"),
    (11, 17, "G9"),
    (11, 18, "b10"),
    (11, 19, "G15"),
    (11, 22, "-b6"),
    (11, 23, "1"),
    (11, 24, "-b12"),
    (12, 17, "B9"),
    (12, 18, "a10"),
    (12, 19, "B16"),
    (13, 7, "G1"),
    (13, 8, "-b3"),
    (13, 9, "G7"),
    (13, 12, "-b4"),
    (13, 13, "1"),
    (13, 14, "-b9"),
    (13, 17, "G10"),
    (13, 18, "-b10"),
    (13, 19, "G16"),
    (14, 7, "B1"),
    (14, 8, "a3"),
    (14, 9, "B8"),
    (15, 2, "-b1"),
    (15, 3, "1"),
    (15, 4, "-b7"),
    (15, 7, "G2"),
    (15, 8, "b3"),
    (15, 9, "G8"),
    (16, 17, "B10"),
    (16, 22, "a6"),
    (17, 17, "A3"),
    (18, 7, "B2"),
    (18, 12, "a4"),
    (18, 17, "B11"),
    (19, 7, "A1"),
    (20, 2, "a1"),
    (20, 7, "B3"),
    (21, 16, "b8"),
    (21, 17, "G11"),
    (21, 21, "1"),
    (21, 22, "b6"),
    (22, 16, "a8"),
    (22, 17, "B12"),
    (23, 6, "-b2"),
    (23, 7, "G3"),
    (23, 11, "1"),
    (23, 12, "b4"),
    (23, 16, "-b8"),
    (23, 17, "G12"),
    (24, 6, "a2"),
    (24, 7, "B4"),
    (25, 1, "1"),
    (25, 2, "b1"),
    (25, 6, "b2"),
    (25, 7, "G4"),
];

/// `α₁..α₁₂`, `β₁..β₁₂` and the free `Γ₁, Γ₇, Γ₁₀, Γ₁₆` of a 25×25 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tab1Coordinates {
    pub alpha: Vec<Scalar>,
    pub beta: Vec<Scalar>,
    pub gamma: [Scalar; 4],
}

impl Tab1Coordinates {
    pub fn alpha(&self, k: usize) -> &Scalar {
        &self.alpha[k - 1]
    }

    pub fn beta(&self, k: usize) -> &Scalar {
        &self.beta[k - 1]
    }

    /// `C(x,y) = α₁/α₁₂`, when defined.
    pub fn c(&self) -> Option<Scalar> {
        (!self.alpha(12).is_zero()).then(|| self.alpha(1) / self.alpha(12))
    }

    /// `α_k = α_{13−k}/C`, `α₂ = C₂α₁`, `α₃ = C₂α₄`, `α₅ = C₂α₆`.
    pub fn alpha_identities_hold(&self) -> bool {
        let Some(c) = self.c() else { return false };
        if self.alpha(1).is_zero() {
            return false;
        }
        let c2 = self.alpha(2) / self.alpha(1);
        (7..=12).all(|k| *self.alpha(k) == self.alpha(13 - k) / &c)
            && *self.alpha(3) == &c2 * self.alpha(4)
            && *self.alpha(5) == &c2 * self.alpha(6)
    }
}

/// Reads the coordinates, or `None` off the vee.
pub fn tab1_coordinates(t: &LambdaTensor) -> Option<Tab1Coordinates> {
    if !same_basis(t, &Poset::vee()) {
        return None;
    }
    let at = |sym: String| {
        let (r, c) = position(&FIGURE1, &sym);
        dense_entry(t, r, c)
    };
    Some(Tab1Coordinates {
        alpha: (1..=12).map(|k| at(format!("a{k}"))).collect(),
        beta: (1..=12).map(|k| at(format!("b{k}"))).collect(),
        gamma: [1, 7, 10, 16].map(|k| at(format!("G{k}"))),
    })
}

fn basis() -> Arc<IntervalBasis> {
    Arc::new(IntervalBasis::new(Poset::vee()))
}

/// Everything the G and F closed forms read. Indices are 1-based.
struct Vals {
    c1: Scalar,
    c2: Scalar,
    c3: Scalar,
    c4: Scalar,
    a: Vec<Scalar>,
    b: Vec<Scalar>,
    g1: Scalar,
    g10: Scalar,
    g16: Scalar,
}

impl Vals {
    fn new(f: Field, c1: Scalar, c2: Scalar, a1: Scalar, a4: Scalar, a6: Scalar) -> Vals {
        let mut a = vec![f.zero(); 13];
        a[2] = &c2 * &a1;
        a[3] = &c2 * &a4;
        a[5] = &c2 * &a6;
        a[1] = a1;
        a[4] = a4;
        a[6] = a6;
        let c1sq = &c1 * &c1;
        for k in 7..=12 {
            a[k] = &a[13 - k] * &c1sq;
        }
        Vals {
            c1,
            c2,
            c3: f.zero(),
            c4: f.zero(),
            a,
            b: vec![f.zero(); 13],
            g1: f.zero(),
            g10: f.zero(),
            g16: f.zero(),
        }
    }

    fn field(&self) -> Field {
        self.c1.field()
    }

    fn g1_form(&self) -> Scalar {
        let (b, c1, c4) = (&self.b, &self.c1, &self.c4);
        -(&b[1] * &b[3] * c1) + &b[2] * &b[4] * c1 + &b[1] * &b[5] * c1 - &b[2] * &b[6] * c1 + &b[5] * c4
            - &b[6] * c4
            + &self.g10
    }

    fn g2_form(&self) -> Scalar {
        let (b, c1, c4) = (&self.b, &self.c1, &self.c4);
        let c1sq = c1 * c1;
        -(&b[1] * &b[1] * &c1sq) + &b[1] * &b[4] * &c1sq - &b[2] * &b[6] * &c1sq
            + &b[3] * &b[6] * &c1sq
            + &b[3] * c1 * c4
            + &b[4] * c1 * c4
            + c4 * c4
            + &c1sq * &self.g1
    }

    fn g3_form(&self) -> Scalar {
        -(&self.c1 * (&self.b[1] + &self.b[2]))
    }

    fn g4_form(&self) -> Scalar {
        let f = self.field();
        let one = f.one();
        let (c1, c2, c3, c4) = (&self.c1, &self.c2, &self.c3, &self.c4);
        let (a1, a4, a6) = (&self.a[1], &self.a[4], &self.a[6]);
        let c1sq = c1 * c1;
        let a16 = a1 * a6 * &c1sq;
        let t1 = -(c3 * c3) * (&a16 - &one) * (a4 * c1 * (a1 * c1 * c2 + c2 + &one) + &one);
        let t2 = -(f.int(2) * c3 * c4) * (&a16 + &one) * (a1 * a4 * &c1sq * c2 - &one);
        let t3 = -(c4 * c4) * (&a16 - &one) * (a4 * c1 * (c2 * (a1 * c1 - &one) - &one) + &one);
        let t4 = f.int(4) * &a16 * &self.g16;
        (t1 + t2 + t3 + t4) / (f.int(4) * &c1sq)
    }

    fn g5_form(&self) -> Scalar {
        let f = self.field();
        let one = f.one();
        let (c1, c2, c3, c4) = (&self.c1, &self.c2, &self.c3, &self.c4);
        let (a4, a6) = (&self.a[4], &self.a[6]);
        let t1 = -((c2 - &one) * (&one + a4 * c1 * (&one + c2 + a6 * c1 * c2)) * c3 * c3);
        let t2 = -(f.int(2) * a4 * c1 * (c2 * c2 - &one) * c3 * c4);
        let t3 = (c2 - &one) * (&one + a4 * c1 * (a6 * c1 * c2 - c2 - &one)) * c4 * c4;
        let t4 = -(f.int(4) * c1 * c2 * &self.g10);
        -(t1 + t2 + t3 + t4) / (f.int(4) * c1)
    }

    fn g6_form(&self) -> Scalar {
        let f = self.field();
        let (c1, c2, c3, c4) = (&self.c1, &self.c2, &self.c3, &self.c4);
        let (a1, a4) = (&self.a[1], &self.a[4]);
        let (s3, s4, p) = (c3 * c3, c4 * c4, c3 * c4);
        let k = a1 * a4 * c1 * c1 * c2;
        let m = a4 * c1;
        let sum = &s3 + &m * &s3 + &m * c2 * &s3 + &k * &s3 - f.int(2) * &p + f.int(2) * &k * &p + &s4
            - &m * &s4
            - &m * c2 * &s4
            + &k * &s4;
        sum / f.int(4)
    }

    // Carries an extra 1/C₁ relative to the printed closed form; without it
    // the family-4 residual does not vanish.
    fn g7_form(&self) -> Scalar {
        let f = self.field();
        let (c1, c2, c3, c4) = (&self.c1, &self.c2, &self.c3, &self.c4);
        let (a4, a6) = (&self.a[4], &self.a[6]);
        let (s3, s4, p) = (c3 * c3, c4 * c4, c3 * c4);
        let m = a4 * c1;
        let k = a4 * a6 * c1 * c1 * c2;
        let sum = -&s3 - &m * &s3 - &m * c2 * &s3 - &k * &s3 + f.int(2) * &m * &p - f.int(2) * &m * c2 * &p + &s4
            - &m * &s4
            - &m * c2 * &s4
            + &k * &s4;
        sum / (f.int(4) * c1)
    }

    fn f_form(&self, j: usize) -> Scalar {
        let f = self.field();
        let two = f.int(2);
        let (c1, c3, c4) = (&self.c1, &self.c3, &self.c4);
        if j <= 6 {
            &self.a[j] * (c4 - c3) / &two - (c3 + c4) / (&two * c1)
        } else {
            &self.a[13 - j] * c1 * (c3 + c4) / &two + (c3 - c4) / &two
        }
    }

    fn symbols(&self, g7: Scalar) -> Symbols {
        let f = self.field();
        let mut s = Symbols::new(f, 12, 16, 4, 16);
        let (a, b) = (&self.a, &self.b);
        s.a = a.clone();
        s.b = b.clone();
        s.big_a[1] = &a[1] * &a[3];
        s.big_a[2] = &a[3] * &a[7];
        s.big_a[3] = &a[4] * &a[8];
        s.big_a[4] = &a[9] * &a[11];
        let bb = [
            (1, -(&a[3] * &b[1])),
            (2, -(&a[4] * &b[2])),
            (3, &a[1] * &b[3]),
            (4, &a[2] * &b[4]),
            (5, &a[5] * &b[9]),
            (6, -(&a[9] * &b[5])),
            (7, &a[7] * &b[3]),
            (8, -(&a[3] * &b[7])),
            (9, -(&a[10] * &b[6])),
            (10, &a[6] * &b[10]),
            (11, -(&a[4] * &b[8])),
            (12, &a[8] * &b[4]),
            (13, &a[11] * &b[9]),
            (14, &a[12] * &b[10]),
            (15, -(&a[9] * &b[11])),
            (16, -(&a[10] * &b[12])),
        ];
        for (k, v) in bb {
            s.big_b[k] = v;
        }
        let g = &mut s.g;
        g[1] = self.g1.clone();
        g[7] = g7;
        g[10] = self.g10.clone();
        g[16] = self.g16.clone();
        let prod = |i: usize, j: usize| -(&b[i] * &b[j]);
        g[2] = prod(1, 3);
        g[3] = prod(2, 4);
        g[5] = prod(5, 9);
        g[8] = prod(7, 3);
        g[9] = prod(6, 10);
        g[12] = prod(8, 4);
        g[14] = prod(11, 9);
        g[15] = prod(10, 12);
        g[4] = -(&g[1] + &g[2] + &g[3]);
        g[6] = -(&g[5] + &g[7] + &g[8]);
        g[11] = -(&g[9] + &g[10] + &g[12]);
        g[13] = -(&g[14] + &g[15] + &g[16]);
        s
    }
}

/// `ε₁, ε₄, ε₆` with `εᵢ² = C₂`; absent ones default to the root `ε`.
fn epsilons(inst: &FamilyInstance, names: &[&str]) -> Result<Vec<Scalar>, FamilyError> {
    let f = inst.field;
    let c2 = inst.get("C2");
    inst.require(c2 == f.one() || c2 == -f.one(), "C₂ ∈ {±1}")?;
    let root = c2.nth_root(2).ok_or(FamilyError::NoSquareRoot {
        family: inst.family_id,
        c2: c2.clone(),
        field: f,
    })?;
    names
        .iter()
        .map(|n| {
            let e = inst.opt(n).unwrap_or_else(|| root.clone());
            inst.require(&e * &e == c2, "ε² = C₂ with εᵢ ∈ {±ε}")?;
            Ok(e)
        })
        .collect()
}

/// Realizes a TAB1 family on `x ≺ y ≻ z`.
pub fn table1_matrix(inst: &FamilyInstance) -> Result<LambdaTensor, FamilyError> {
    inst.require(!inst.family_id.is_t56(), "family on x ≺ y ≻ z")?;
    inst.check_names()?;
    let f = inst.field;
    let p = |k: &str| inst.get(k);
    let one = f.one();
    let nonzero = |names: &[&str], clause: &str| inst.require(names.iter().all(|n| !p(n).is_zero()), clause);
    let (v, g7) = match inst.family_id {
        Tab1_1 => {
            nonzero(&["alpha1", "alpha4", "alpha6"], "α₁, α₄, α₆ ∈ K^×")?;
            nonzero(&["C1", "C2"], "C₁, C₂ ∈ K^×")?;
            let v = Vals::new(f, p("C1"), p("C2"), p("alpha1"), p("alpha4"), p("alpha6"));
            (v, f.zero())
        }
        Tab1_2a | Tab1_2b => {
            let two_a = inst.family_id == Tab1_2a;
            if two_a {
                nonzero(&["C1", "Gamma7"], "C₁, Γ₇ ∈ K^×")?;
            } else {
                nonzero(&["C1", "Gamma16"], "C₁, Γ₁₆ ∈ K^×")?;
            }
            let c1 = p("C1");
            let (e1, e4, e6) = if two_a {
                let e = epsilons(inst, &["eps1", "eps4", "eps6"])?;
                (e[0].clone(), e[1].clone(), e[2].clone())
            } else {
                let e = epsilons(inst, &["eps1", "eps4"])?;
                (e[0].clone(), e[1].clone(), e[0].clone())
            };
            let mut v = Vals::new(f, c1.clone(), p("C2"), e1 / &c1, e4 / &c1, e6 / &c1);
            v.g16 = if two_a { f.zero() } else { p("Gamma16") };
            v.g1 = &v.a[1] * &v.a[6] * &v.g16;
            let g7 = p("Gamma7");
            v.g10 = &v.c2 * &g7;
            (v, g7)
        }
        Tab1_3a | Tab1_3b | Tab1_3c => {
            let c1 = p("C1");
            inst.require(!c1.is_zero(), "C₁ ∈ K^×")?;
            let a = &one / &c1;
            let mut v = Vals::new(f, c1.clone(), one.clone(), a.clone(), a.clone(), a);
            match inst.family_id {
                Tab1_3a => {
                    let b1 = p("beta1");
                    inst.require(!b1.is_zero(), "β₁, C₁ ∈ K^×")?;
                    for j in 1..=6 {
                        v.b[j] = b1.clone();
                    }
                    v.g1 = p("Gamma1");
                    v.g10 = p("Gamma10");
                    v.c4 = v.g3_form();
                }
                Tab1_3b => {
                    let (b1, b2) = (p("beta1"), p("beta2"));
                    inst.require(b1 != b2, "β₁ ≠ β₂")?;
                    for (j, x) in [(1, &b1), (2, &b2), (3, &b2), (4, &b1), (5, &b2), (6, &b1)] {
                        v.b[j] = x.clone();
                    }
                    v.g1 = p("Gamma1");
                    v.g10 = p("Gamma10");
                    v.c4 = p("C4");
                }
                _ => {
                    let (b1, b2, b5) = (p("beta1"), p("beta2"), p("beta5"));
                    inst.require(b2 != b5, "β₂ ≠ β₅")?;
                    let b6 = &b1 + &b2 - &b5;
                    for (j, x) in [(1, &b1), (2, &b2), (3, &b2), (4, &b1), (5, &b5), (6, &b6)] {
                        v.b[j] = x.clone();
                    }
                    v.g1 = &b1 * &b2;
                    v.g10 = -(&b1 * &b6 * &c1);
                    v.c4 = v.g3_form();
                }
            }
            for j in 1..=6 {
                v.b[13 - j] = &v.c4 + &c1 * &v.b[j];
            }
            let g7 = v.g1_form();
            v.g16 = v.g2_form();
            (v, g7)
        }
        Tab1_4a | Tab1_4b => {
            inst.odd_characteristic()?;
            let mut v = if inst.family_id == Tab1_4a {
                nonzero(&["alpha1", "alpha4", "alpha6"], "α₁, α₄, α₆ ∈ K^×")?;
                nonzero(&["C1", "C2"], "C₁, C₂ ∈ K^×")?;
                Vals::new(f, p("C1"), p("C2"), p("alpha1"), p("alpha4"), p("alpha6"))
            } else {
                nonzero(&["C1"], "C₁ ∈ K^×")?;
                let c1 = p("C1");
                let e = epsilons(inst, &["eps1", "eps4", "eps6"])?;
                Vals::new(f, c1.clone(), p("C2"), &e[0] / &c1, &e[1] / &c1, &e[2] / &c1)
            };
            v.c3 = p("C3");
            v.c4 = p("C4");
            for j in 1..=12 {
                v.b[j] = v.f_form(j);
            }
            v.g10 = if inst.family_id == Tab1_4a { v.g7_form() } else { p("Gamma10") };
            let g7 = v.g5_form();
            v.g16 = v.g6_form();
            v.g1 = v.g4_form();
            (v, g7)
        }
        _ => unreachable!(),
    };
    Ok(realize(basis(), f, &FIGURE1, &v.symbols(g7)))
}

/// Solves the twelve F equations for
/// `S = C₃+C₄`, `D = C₄−C₃`. Rank-deficient systems get the particular
/// solution with the free unknown set to zero.
fn solve_sd(co: &Tab1Coordinates, c1: &Scalar) -> Option<(Scalar, Scalar)> {
    let f = c1.field();
    let two = f.int(2);
    // rows: [coef S, coef D, rhs]
    let mut rows: Vec<[Scalar; 3]> = Vec::new();
    for j in 1..=6 {
        rows.push([-(f.one() / (&two * c1)), co.alpha(j) / &two, co.beta(j).clone()]);
    }
    for j in 7..=12 {
        rows.push([co.alpha(13 - j) * c1 / &two, -(f.one() / &two), co.beta(j).clone()]);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..2 {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].inv().ok()?;
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let m = rows[k][c].clone();
                for x in 0..3 {
                    rows[k][x] = &rows[k][x] - &m * &rows[r][x];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[2].is_zero()) {
        return None;
    }
    let mut sol = [f.zero(), f.zero()];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][2].clone();
    }
    let [s, d] = sol;
    Some((s, d))
}

pub(crate) fn candidates(t: &LambdaTensor) -> Vec<FamilyInstance> {
    let Some(co) = tab1_coordinates(t) else {
        return Vec::new();
    };
    let f = t.field();
    let a1 = co.alpha(1).clone();
    if a1.is_zero() || co.alpha(12).is_zero() {
        return Vec::new();
    }
    let c2 = co.alpha(2) / &a1;
    let Some(r) = (co.alpha(12) / &a1).nth_root(2) else {
        return Vec::new();
    };
    let mut roots = vec![r.clone()];
    if -&r != r {
        roots.push(-&r);
    }
    let [g1, g7, g10, g16] = co.gamma.clone();
    let inst = |id| FamilyInstance::new(id, f);
    let mut out = Vec::new();
    for c1 in roots {
        let eps = |k: usize| co.alpha(k) * &c1;
        out.push(
            inst(Tab1_1)
                .with("alpha1", a1.clone())
                .with("alpha4", co.alpha(4).clone())
                .with("alpha6", co.alpha(6).clone())
                .with("C1", c1.clone())
                .with("C2", c2.clone()),
        );
        out.push(
            inst(Tab1_2a)
                .with("C1", c1.clone())
                .with("Gamma7", g7.clone())
                .with("C2", c2.clone())
                .with("eps1", eps(1))
                .with("eps4", eps(4))
                .with("eps6", eps(6)),
        );
        out.push(
            inst(Tab1_2b)
                .with("C1", c1.clone())
                .with("Gamma16", g16.clone())
                .with("Gamma7", g7.clone())
                .with("C2", c2.clone())
                .with("eps1", eps(1))
                .with("eps4", eps(4)),
        );
        out.push(
            inst(Tab1_3a)
                .with("beta1", co.beta(1).clone())
                .with("C1", c1.clone())
                .with("Gamma1", g1.clone())
                .with("Gamma10", g10.clone()),
        );
        out.push(
            inst(Tab1_3b)
                .with("beta1", co.beta(1).clone())
                .with("beta2", co.beta(2).clone())
                .with("C1", c1.clone())
                .with("C4", co.beta(12) - &c1 * co.beta(1))
                .with("Gamma1", g1.clone())
                .with("Gamma10", g10.clone()),
        );
        out.push(
            inst(Tab1_3c)
                .with("beta1", co.beta(1).clone())
                .with("beta2", co.beta(2).clone())
                .with("beta5", co.beta(5).clone())
                .with("C1", c1.clone()),
        );
        if f.characteristic() != 2 {
            if let Some((s, d)) = solve_sd(&co, &c1) {
                let two = f.int(2);
                let c3 = (&s - &d) / &two;
                let c4 = (&s + &d) / &two;
                out.push(
                    inst(Tab1_4a)
                        .with("alpha1", a1.clone())
                        .with("alpha4", co.alpha(4).clone())
                        .with("alpha6", co.alpha(6).clone())
                        .with("C1", c1.clone())
                        .with("C2", c2.clone())
                        .with("C3", c3.clone())
                        .with("C4", c4.clone()),
                );
                out.push(
                    inst(Tab1_4b)
                        .with("C1", c1.clone())
                        .with("C3", c3)
                        .with("C4", c4)
                        .with("Gamma10", g10.clone())
                        .with("C2", c2.clone())
                        .with("eps1", eps(1))
                        .with("eps4", eps(4))
                        .with("eps6", eps(6)),
                );
            }
        }
    }
    out.sort_by_key(|i| i.family_id);
    out
}

/// `C₂ ∈ {±1}` whose square root exists, with random `εᵢ = ±ε`.
fn draw_eps<R: Rng + ?Sized>(inst: FamilyInstance, f: Field, names: &[&str], rng: &mut R) -> Result<FamilyInstance, FamilyError> {
    let choices: Vec<Scalar> = [f.one(), -f.one()]
        .into_iter()
        .filter(|c| c.nth_root(2).is_some())
        .collect();
    let c2 = choices[rng.gen_range(0..choices.len())].clone();
    let root = c2.nth_root(2).expect("filtered");
    let mut inst = inst.with("C2", c2);
    for n in names {
        let e = if rng.gen_bool(0.5) { root.clone() } else { -&root };
        inst = inst.with(n, e);
    }
    Ok(inst)
}

pub(crate) fn draw<R: Rng + ?Sized>(id: FamilyId, f: Field, rng: &mut R) -> Result<FamilyInstance, FamilyError> {
    let inst = FamilyInstance::new(id, f);
    macro_rules! s {
        ($nz:expr) => {
            f.sample(rng, $nz)
        };
    }
    Ok(match id {
        Tab1_1 => inst
            .with("alpha1", s!(true))
            .with("alpha4", s!(true))
            .with("alpha6", s!(true))
            .with("C1", s!(true))
            .with("C2", s!(true)),
        Tab1_2a => {
            let inst = inst.with("C1", s!(true)).with("Gamma7", s!(true));
            draw_eps(inst, f, &["eps1", "eps4", "eps6"], rng)?
        }
        Tab1_2b => {
            let inst = inst.with("C1", s!(true)).with("Gamma16", s!(true)).with("Gamma7", s!(false));
            draw_eps(inst, f, &["eps1", "eps4"], rng)?
        }
        Tab1_3a => inst
            .with("beta1", s!(true))
            .with("C1", s!(true))
            .with("Gamma1", s!(false))
            .with("Gamma10", s!(false)),
        Tab1_3b => inst
            .with("beta1", s!(false))
            .with("beta2", s!(false))
            .with("C1", s!(true))
            .with("C4", s!(false))
            .with("Gamma1", s!(false))
            .with("Gamma10", s!(false)),
        Tab1_3c => inst
            .with("beta1", s!(false))
            .with("beta2", s!(false))
            .with("beta5", s!(false))
            .with("C1", s!(true)),
        Tab1_4a => inst
            .with("alpha1", s!(true))
            .with("alpha4", s!(true))
            .with("alpha6", s!(true))
            .with("C1", s!(true))
            .with("C2", s!(true))
            .with("C3", s!(false))
            .with("C4", s!(false)),
        Tab1_4b => {
            let inst = inst
                .with("C1", s!(true))
                .with("C3", s!(false))
                .with("C4", s!(false))
                .with("Gamma10", s!(false));
            draw_eps(inst, f, &["eps1", "eps4", "eps6"], rng)?
        }
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_has_81_distinct_cells() {
        let mut cells: Vec<(usize, usize)> = FIGURE1.iter().map(|&(r, c, _)| (r, c)).collect();
        cells.sort();
        cells.dedup();
        assert_eq!(cells.len(), 81);
    }

    #[test]
    fn family3_first_c4() {
        let q = Field::Rational;
        let inst = FamilyInstance::with_ints(Tab1_3a, q, &[("beta1", 1), ("C1", 1), ("Gamma1", 0), ("Gamma10", 0)]);
        let t = table1_matrix(&inst).unwrap();
        let co = tab1_coordinates(&t).unwrap();
        // C₄ = −C₁(β₁+β₂) = −2, so β₁₂ = C₄ + C₁β₁ = −1
        assert_eq!(*co.beta(12), q.int(-1));
        assert!(co.alpha_identities_hold());
    }

    #[test]
    fn eps_needs_a_root() {
        let q = Field::Rational;
        let inst = FamilyInstance::with_ints(Tab1_2a, q, &[("C1", 1), ("Gamma7", 1), ("C2", -1)]);
        assert!(matches!(table1_matrix(&inst), Err(FamilyError::NoSquareRoot { .. })));
        let g5 = Field::prime(5).unwrap();
        let inst = FamilyInstance::with_ints(Tab1_2a, g5, &[("C1", 1), ("Gamma7", 1), ("C2", -1), ("eps1", 2), ("eps4", 2), ("eps6", 3)]);
        assert!(table1_matrix(&inst).is_ok());
    }
}
