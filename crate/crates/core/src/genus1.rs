//! Elliptic (genus-1) invariants.
//!
//! For the plane, two independent recursions: the boundary-relation
//! recursion obtained from the master relation of [`crate::feynman`], and
//! the far simpler Virasoro-type recursion, which must agree with it.
//!
//! For space curves, the elliptic coefficients `N1[a,b]` (degree `n` with
//! `a + 2b = 4n`, meeting `a` lines and `b` points) are determined level by
//! level from coefficient identities of the master relation: the
//! four-line-insertion slots determine `N1[a,b]` for `a >= 2` in terms of
//! `N1[a-2,b+1]` and lower degrees, and the two-line/two-plane slots
//! determine `N1[a,b]` for `b >= 2` outright. Keys reachable both ways must
//! agree, every slot equation is verified after solving, and the
//! transcription of the `b >= 2` identity is additionally kept as an
//! explicit term list and checked row by row.
//!
//! The derived count `N1[a,b] + (2n-1) N0[a,b] / 12` is the number of
//! honest elliptic space curves through the constraints; integrality and
//! non-negativity of that combination is asserted, not assumed.

use std::collections::BTreeMap;
use std::fmt;

use crate::comb::{binom_rat, factorial_rat, multinom3_rat};
use crate::feynman::{relation_genus0_part, relation_genus1_response, LegContext};
use crate::genus0::{Cp3Table, FrobeniusData};
use crate::rat::Rat;
use crate::series::{Expo, TruncSeries};

#[derive(Clone, Debug)]
pub enum Genus1Error {
    MissingDependency(String),
    CrossPath(String),
    NonIntegral(String),
    Underdetermined(String),
}

impl fmt::Display for Genus1Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus1Error::MissingDependency(m) => write!(f, "missing dependency: {m}"),
            Genus1Error::CrossPath(m) => write!(f, "cross-path disagreement: {m}"),
            Genus1Error::NonIntegral(m) => write!(f, "integrality failure: {m}"),
            Genus1Error::Underdetermined(m) => write!(f, "underdetermined: {m}"),
        }
    }
}

impl std::error::Error for Genus1Error {}

/// The three-part boundary recursion for elliptic plane curves. `N1_1` and
/// `N1_2` come out zero from the recursion itself (empty ranges plus the
/// cancellation in the final bracket), with no special-casing.
pub fn getzler_cp2(
    n_max: u32,
    rational: &BTreeMap<u32, Rat>,
) -> Result<BTreeMap<u32, Rat>, Genus1Error> {
    for n in 1..=n_max {
        if !rational.contains_key(&n) {
            return Err(Genus1Error::MissingDependency(format!("N0[{n}]")));
        }
    }
    let mut table: BTreeMap<u32, Rat> = BTreeMap::new();
    for n in 1..=n_max {
        let six_n1 = recursion_rhs(n, rational, &table)?;
        let v = six_n1 / Rat::int(6);
        if !v.is_integer() || v.is_negative() {
            return Err(Genus1Error::NonIntegral(format!("N1[{n}] = {v}")));
        }
        table.insert(n, v);
    }
    Ok(table)
}

/// Right-hand side of the boundary recursion: the value of `6 N1_n` given
/// all lower entries.
fn recursion_rhs(
    n: u32,
    n0: &BTreeMap<u32, Rat>,
    n1: &BTreeMap<u32, Rat>,
) -> Result<Rat, Genus1Error> {
    let nn = n as i64;
    let mut acc = Rat::zero();
    // three-part splittings i + j + k = n
    for i in 1..n {
        for j in 1..n {
            if i + j >= n {
                break;
            }
            let k = n - i - j;
            let (ii, jj, kk) = (i as i64, j as i64, k as i64);
            let c = multinom3_rat(3 * nn - 2, 3 * jj - 1, 3 * kk - 1)
                * Rat::int(ii * jj.pow(3) * kk.pow(3) * (2 * ii - jj - kk));
            acc += c * n1[&i].clone() * n0[&j].clone() * n0[&k].clone();
        }
    }
    // two-part genus-1 x genus-0 splittings
    for i in 1..n {
        let j = n - i;
        let (ii, jj) = (i as i64, j as i64);
        let c1 = binom_rat(3 * nn - 2, 3 * ii) * Rat::int(ii * jj * jj * (8 * ii - jj));
        let c2 = binom_rat(3 * nn - 2, 3 * ii - 1) * Rat::int(2 * (ii + jj) * jj.pow(3));
        acc += (c1 - c2) * Rat::int(2) * n1[&i].clone() * n0[&j].clone();
    }
    // genus-0 block
    let mut block = Rat::zero();
    for i in 1..n {
        let j = n - i;
        let (ii, jj) = (i as i64, j as i64);
        let c = binom_rat(3 * nn - 2, 3 * ii - 1)
            * Rat::int((nn * nn - 3 * nn - 6 * ii * jj) * ii.pow(3) * jj.pow(3));
        block += c * n0[&i].clone() * n0[&j].clone();
    }
    block += Rat::int(6 * nn.pow(3) * (nn - 1)) * n0[&n].clone();
    acc -= block / Rat::int(24);
    Ok(acc)
}

/// `6 N1_n - rhs_n`: zero exactly when the boundary recursion holds at
/// degree `n`. Exposed so the relation residual's coefficient stream can be
/// compared against it instance by instance.
pub fn recursion_residual(
    n: u32,
    n0: &BTreeMap<u32, Rat>,
    n1: &BTreeMap<u32, Rat>,
) -> Result<Rat, Genus1Error> {
    let rhs = recursion_rhs(n, n0, n1)?;
    let lhs = Rat::int(6)
        * n1.get(&n)
            .ok_or_else(|| Genus1Error::MissingDependency(format!("N1[{n}]")))?
            .clone();
    Ok(lhs - rhs)
}

/// The Virasoro-type recursion:
/// `N1_n = C(n,3) N0_n / 12 + (1/9) sum_{i+j=n} C(3n-1, 3i-1)(3i^2-2i) j N0_i N1_j`.
pub fn ehx_cp2(
    n_max: u32,
    rational: &BTreeMap<u32, Rat>,
) -> Result<BTreeMap<u32, Rat>, Genus1Error> {
    for n in 1..=n_max {
        if !rational.contains_key(&n) {
            return Err(Genus1Error::MissingDependency(format!("N0[{n}]")));
        }
    }
    let mut table: BTreeMap<u32, Rat> = BTreeMap::new();
    for n in 1..=n_max {
        let nn = n as i64;
        let mut acc = binom_rat(nn, 3) * rational[&n].clone() / Rat::int(12);
        let mut sum = Rat::zero();
        for i in 1..n {
            let j = n - i;
            let ii = i as i64;
            let c = binom_rat(3 * nn - 1, 3 * ii - 1) * Rat::int((3 * ii * ii - 2 * ii) * j as i64);
            sum += c * rational[&i].clone() * table[&j].clone();
        }
        acc += sum / Rat::int(9);
        table.insert(n, acc);
    }
    Ok(table)
}

/// Divisor sums `sigma(beta) = sum_{d | beta} d` for `1 <= beta <= beta_max`,
/// the elliptic-curve invariants (`sigma(beta)` counts connected unramified
/// degree-`beta` covers with automorphisms divided out, weighted by `1/beta`
/// in the potential).
pub fn elliptic_curve_sigma(beta_max: u32) -> BTreeMap<u32, Rat> {
    let mut sums = vec![0i64; beta_max as usize + 1];
    for d in 1..=beta_max as usize {
        let mut m = d;
        while m <= beta_max as usize {
            sums[m] += d as i64;
            m += d;
        }
    }
    (1..=beta_max).map(|b| (b, Rat::int(sums[b as usize]))).collect()
}

/// The weight-2 Eisenstein series `G2(q) = -1/24 + sum sigma(b) q^b` as a
/// one-variable series; `dF1(E)/dt1 = G2(q e^{t1})`.
pub fn g2_series(q_cap: u32) -> TruncSeries {
    let zero = TruncSeries::zero(vec![crate::series::VarSpec::new("q", 0)], vec![q_cap as i32]);
    let mut s = zero.clone();
    s.add_term(Expo::unit(), Rat::new(-1, 24));
    for (b, sigma) in elliptic_curve_sigma(q_cap) {
        s.add_term(Expo::of(&[(0, b as i32)]), sigma);
    }
    s
}

/// Coefficient of `q^beta (e^{beta t1} - 1)` in the genus-1 potential of an
/// elliptic curve: `sigma(beta) / beta`.
pub fn elliptic_f1_coefficient(beta: u32) -> Rat {
    assert!(beta >= 1);
    let sigma = elliptic_curve_sigma(beta).remove(&beta).unwrap();
    sigma / Rat::int(beta as i64)
}

/// Coefficient of `t1` in the genus-1 potential: `-int c_{d-1}(V) cup w / 24`.
pub fn bcov_linear_term(fd: &FrobeniusData) -> Rat {
    -Rat::new(fd.chern_pairing, 24)
}

// ---------------------------------------------------------------------------
// Elliptic invariants of CP^3 from the master relation
// ---------------------------------------------------------------------------

/// Shared pieces of the master relation for `CP^3` at a fixed truncation
/// order: genus-0 leg derivatives, the genus-0-only part, and a running
/// total of the (linear) genus-1 response.
pub struct Cp3Relation {
    pub ctx: LegContext,
    f03: TruncSeries,
    f04: TruncSeries,
    /// x-degree-0 (classical) slices, enough for same-level probes.
    f03_classical: TruncSeries,
    f04_classical: TruncSeries,
    /// genus-0-only part of the relation.
    c_part: TruncSeries,
    /// running `L(F1-so-far)`, updated incrementally (L is linear in F1).
    response: TruncSeries,
}

impl Cp3Relation {
    pub fn new(n_max: u32, rational: &Cp3Table) -> Result<Self, Genus1Error> {
        // start the genus-1 potential at its zero-degree part, the linear
        // term -t1/4; quantum terms are absorbed level by level
        let zero_elliptic = zero_elliptic_like(rational, n_max)?;
        let pots = crate::feynman::cp3_potentials(n_max as i32, rational, &zero_elliptic)
            .map_err(|e| Genus1Error::MissingDependency(e.to_string()))?;
        let c_part = relation_genus0_part(&pots.ctx, &pots.f03, &pots.f04, &pots.f05);
        let response =
            relation_genus1_response(&pots.ctx, &pots.f03, &pots.f04, &pots.f11, &pots.f12);
        let f03_classical = x_slice(&pots.f03, &pots.ctx, 0);
        let f04_classical = x_slice(&pots.f04, &pots.ctx, 0);
        Ok(Cp3Relation {
            ctx: pots.ctx,
            f03: pots.f03,
            f04: pots.f04,
            f03_classical,
            f04_classical,
            c_part,
            response,
        })
    }

    /// Residual so far: `C + L(F1-so-far)`.
    pub fn residual(&self) -> TruncSeries {
        self.c_part.add(&self.response)
    }

    /// Absorb newly determined genus-1 terms into the running response.
    fn absorb(&mut self, f1_increment: &TruncSeries) {
        let f11 = self.ctx.leg_derivative(f1_increment, 1);
        let f12 = self.ctx.leg_derivative(f1_increment, 2);
        let delta = relation_genus1_response(&self.ctx, &self.f03, &self.f04, &f11, &f12);
        self.response = self.response.add(&delta);
    }

    /// Linear response of the residual, at the `x^n` slice, to the level-`n`
    /// monomial `x^n t2^a t3^b / (a! b!)`. Only the classical (x-degree-0)
    /// slices of `f03` and `f04` can pair with a level-`n` perturbation
    /// without leaving the slice, so the full genus-1 part of the relation
    /// collapses to a product with two tiny polynomials.
    fn probe(&self, n: u32, a: u32, b: u32) -> TruncSeries {
        let ctx = &self.ctx;
        let mut m = ctx.zero();
        let w = factorial_rat(a as u64) * factorial_rat(b as u64);
        m.add_term(
            Expo::of(&[
                (ctx.x(), n as i32),
                (ctx.t(2), a as i32),
                (ctx.t(3), b as i32),
            ]),
            Rat::one() / w,
        );
        let f11 = ctx.leg_derivative(&m, 1);
        let f12 = ctx.leg_derivative(&m, 2);
        relation_genus1_response(ctx, &self.f03_classical, &self.f04_classical, &f11, &f12)
    }
}

fn zero_elliptic_like(rational: &Cp3Table, n_max: u32) -> Result<Cp3Table, Genus1Error> {
    let mut t = Cp3Table::default();
    for n in 1..=n_max {
        for b in 0..=2 * n {
            let a = 4 * n - 2 * b;
            rational
                .get(a as i64, b as i64)
                .map_err(|e| Genus1Error::MissingDependency(e.to_string()))?;
            t.values.insert((a, b), Rat::zero());
        }
    }
    Ok(t)
}

fn x_slice(s: &TruncSeries, ctx: &LegContext, n: i32) -> TruncSeries {
    let x = ctx.x();
    let mut out = TruncSeries::zero_like(s);
    for (e, c) in s.terms() {
        if e.get(x) == n {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Coefficient equations of the residual slice: the slot with four
/// line-insertion legs at `t2^{a-2} t3^b` (valid for `a >= 2`), and the slot
/// with two line and two plane legs at `t2^a t3^{b-2}` (valid for `b >= 2`).
fn slot_a(ctx: &LegContext, n: u32, a: u32, b: u32) -> Expo {
    Expo::of(&[
        (ctx.s(1), 4),
        (ctx.x(), n as i32),
        (ctx.t(2), a as i32 - 2),
        (ctx.t(3), b as i32),
    ])
}

fn slot_b(ctx: &LegContext, n: u32, a: u32, b: u32) -> Expo {
    Expo::of(&[
        (ctx.s(1), 2),
        (ctx.s(2), 2),
        (ctx.x(), n as i32),
        (ctx.t(2), a as i32),
        (ctx.t(3), b as i32 - 2),
    ])
}

/// Solver state for one degree level of the `CP^3` elliptic table.
struct Cp3Level {
    n: u32,
    keys: Vec<(u32, u32)>,
    /// residual slice with the unknowns set to zero
    base: BTreeMap<Expo, Rat>,
    /// per-key linear response slices
    probes: Vec<BTreeMap<Expo, Rat>>,
}

impl Cp3Level {
    fn new(rel: &Cp3Relation, n: u32) -> Self {
        let keys: Vec<(u32, u32)> = (0..=2 * n).map(|b| (4 * n - 2 * b, b)).collect();
        let residual = rel.residual();
        let base = x_slice(&residual, &rel.ctx, n as i32)
            .terms()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        let probes = keys
            .iter()
            .map(|&(a, b)| {
                x_slice(&rel.probe(n, a, b), &rel.ctx, n as i32)
                    .terms()
                    .map(|(e, c)| (e.clone(), c.clone()))
                    .collect()
            })
            .collect();
        Cp3Level { n, keys, base, probes }
    }

    /// Solve the equation at `slot` for the key `target`, given already
    /// determined same-level values. Errors if the equation involves an
    /// undetermined key other than the target, or misses the target.
    fn solve_slot(
        &self,
        slot: &Expo,
        target: (u32, u32),
        known: &BTreeMap<(u32, u32), Rat>,
    ) -> Result<Rat, Genus1Error> {
        let mut constant = self.base.get(slot).cloned().unwrap_or_else(Rat::zero);
        let mut target_coeff = Rat::zero();
        for (key, probe) in self.keys.iter().zip(&self.probes) {
            let c = probe.get(slot).cloned().unwrap_or_else(Rat::zero);
            if c.is_zero() {
                continue;
            }
            if *key == target {
                target_coeff = c;
            } else if let Some(v) = known.get(key) {
                constant += c * v.clone();
            } else {
                return Err(Genus1Error::Underdetermined(format!(
                    "degree {}: slot equation for {:?} involves undetermined {:?}",
                    self.n, target, key
                )));
            }
        }
        if target_coeff.is_zero() {
            return Err(Genus1Error::Underdetermined(format!(
                "degree {}: slot equation does not involve {:?}",
                self.n, target
            )));
        }
        Ok(-constant / target_coeff)
    }
}

/// Elliptic invariant `N1[a,b]` (`a >= 2`) from the four-line coefficient
/// identity of the master relation, given the rational table and the
/// already-known elliptic entries (`N1[a-2,b+1]` at the same degree, plus
/// all lower degrees).
pub fn cp3_relation_a(
    a: u32,
    b: u32,
    rational: &Cp3Table,
    partial: &Cp3Table,
) -> Result<Rat, Genus1Error> {
    assert!(a >= 2, "the four-line identity needs a >= 2");
    let n = Cp3Table::degree_of(a, b);
    let rel = relation_with_lower_levels(n, rational, partial)?;
    let level = Cp3Level::new(&rel, n);
    let mut same_level = BTreeMap::new();
    if let Ok(v) = partial.get(a as i64 - 2, b as i64 + 1) {
        same_level.insert((a - 2, b + 1), v);
    }
    level.solve_slot(&slot_a(&rel.ctx, n, a, b), (a, b), &same_level)
}

/// Elliptic invariant `N1[a,b]` (`b >= 2`) from the two-line/two-plane
/// coefficient identity; involves no other same-degree elliptic entry.
pub fn cp3_relation_b(
    a: u32,
    b: u32,
    rational: &Cp3Table,
    partial: &Cp3Table,
) -> Result<Rat, Genus1Error> {
    assert!(b >= 2, "the two-plane identity needs b >= 2");
    let n = Cp3Table::degree_of(a, b);
    let rel = relation_with_lower_levels(n, rational, partial)?;
    let level = Cp3Level::new(&rel, n);
    level.solve_slot(&slot_b(&rel.ctx, n, a, b), (a, b), &BTreeMap::new())
}

fn relation_with_lower_levels(
    n: u32,
    rational: &Cp3Table,
    partial: &Cp3Table,
) -> Result<Cp3Relation, Genus1Error> {
    let mut rel = Cp3Relation::new(n, rational)?;
    let mut inc = rel.ctx.zero();
    for m in 1..n {
        for bb in 0..=2 * m {
            let aa = 4 * m - 2 * bb;
            let v = partial
                .get(aa as i64, bb as i64)
                .map_err(|e| Genus1Error::MissingDependency(format!("elliptic {e}")))?;
            let w = factorial_rat(aa as u64) * factorial_rat(bb as u64);
            inc.add_term(
                Expo::of(&[
                    (rel.ctx.x(), m as i32),
                    (rel.ctx.t(2), aa as i32),
                    (rel.ctx.t(3), bb as i32),
                ]),
                v / w,
            );
        }
    }
    rel.absorb(&inc);
    Ok(rel)
}

/// Full elliptic table of `CP^3` through degree `n_max`: at each degree the
/// `b >= 2` identity seeds `N1[0, 2n]`, the `a >= 2` identity fills
/// increasing `a`, entries reachable both ways must agree, and after each
/// level every slot equation is checked to vanish.
pub fn cp3_elliptic_table(n_max: u32, rational: &Cp3Table) -> Result<Cp3Table, Genus1Error> {
    let mut rel = Cp3Relation::new(n_max, rational)?;
    let mut table = Cp3Table::default();
    for n in 1..=n_max {
        let level = Cp3Level::new(&rel, n);
        let mut solved: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        // seed at a = 0 from the two-plane slot
        let b0 = 2 * n;
        let v0 = level.solve_slot(&slot_b(&rel.ctx, n, 0, b0), (0, b0), &solved)?;
        solved.insert((0, b0), v0);
        // march up in a with the four-line slot
        for b in (0..2 * n).rev() {
            let a = 4 * n - 2 * b;
            let v = level.solve_slot(&slot_a(&rel.ctx, n, a, b), (a, b), &solved)?;
            // overdetermined: the two-plane slot must give the same value
            if b >= 2 {
                let w = level.solve_slot(&slot_b(&rel.ctx, n, a, b), (a, b), &solved)?;
                if w != v {
                    return Err(Genus1Error::CrossPath(format!(
                        "N1[{a},{b}]: four-line slot {v} vs two-plane slot {w}"
                    )));
                }
            }
            solved.insert((a, b), v);
        }
        // absorb the level into the running response and verify the slice
        let ctx_x = rel.ctx.x();
        let ctx_t2 = rel.ctx.t(2);
        let ctx_t3 = rel.ctx.t(3);
        let mut inc = rel.ctx.zero();
        for (&(a, b), v) in &solved {
            let w = factorial_rat(a as u64) * factorial_rat(b as u64);
            inc.add_term(
                Expo::of(&[(ctx_x, n as i32), (ctx_t2, a as i32), (ctx_t3, b as i32)]),
                v.clone() / w,
            );
            table.values.insert((a, b), v.clone());
        }
        rel.absorb(&inc);
        let check = x_slice(&rel.residual(), &rel.ctx, n as i32);
        if !check.is_zero() {
            return Err(Genus1Error::CrossPath(format!(
                "degree {n}: residual slice does not vanish after solving"
            )));
        }
    }
    // the full residual is now identically zero within caps
    if !rel.residual().is_zero() {
        return Err(Genus1Error::CrossPath("full relation residual nonzero".into()));
    }
    Ok(table)
}

/// Transcribed term list of the `b >= 2` identity, solved for `N1[a,b]`.
/// Kept as an independent check on the slot extraction: the two must agree
/// on every row of the table.
pub fn cp3_relation_b_display(
    a: u32,
    b: u32,
    n0: &Cp3Table,
    n1: &Cp3Table,
) -> Result<Rat, Genus1Error> {
    assert!(b >= 2);
    let n = Cp3Table::degree_of(a, b) as i64;
    let (a, b) = (a as i64, b as i64);
    let g0 = |x: i64, y: i64| n0.get(x, y).map_err(|e| Genus1Error::MissingDependency(e.to_string()));
    let g1 = |x: i64, y: i64| n1.get(x, y).map_err(|e| Genus1Error::MissingDependency(e.to_string()));
    let deg = |x: i64, y: i64| (x + 2 * y) / 4;

    let mut rest = Rat::new(n * (2 * n - 1), 24) * g0(a + 2, b - 1)?;
    rest += g0(a + 4, b - 2)? / Rat::int(48);

    // splittings of (a+2, b-1) into two positive-degree keys
    let mut s1 = Rat::zero();
    for a1 in 0..=a + 2 {
        for b1 in 0..=b - 1 {
            let (a2, b2) = (a + 2 - a1, b - 1 - b1);
            if (a1 + 2 * b1) % 4 != 0 || (a2 + 2 * b2) % 4 != 0 {
                continue;
            }
            let (n1_, n2_) = (deg(a1, b1), deg(a2, b2));
            if n1_ < 1 || n2_ < 1 {
                continue;
            }
            let f = g1(a1, b1)? * g0(a2, b2)?;
            if f.is_zero() {
                continue;
            }
            let first = Rat::int(n2_)
                * (Rat::int(n) * binom_rat(a, a1) + Rat::int(n2_) * binom_rat(a, a1 - 1))
                * binom_rat(b - 2, b1 - 1);
            let second = (Rat::int(n1_ * (6 * n1_ - n2_)) * binom_rat(a, a1)
                + Rat::int(n2_ * (16 * n1_ - n2_)) * binom_rat(a, a1 - 1)
                + Rat::int(6 * n2_ * n2_) * binom_rat(a, a1 - 2))
                * binom_rat(b - 2, b1)
                / Rat::int(6);
            s1 += f * (first - second);
        }
    }
    rest += s1;

    // splittings of (a+4, b-2), elliptic x rational
    let mut s2 = Rat::zero();
    let mut s3 = Rat::zero();
    for a1 in 0..=a + 4 {
        for b1 in 0..=b - 2 {
            let (a2, b2) = (a + 4 - a1, b - 2 - b1);
            if (a1 + 2 * b1) % 4 != 0 || (a2 + 2 * b2) % 4 != 0 {
                continue;
            }
            let (n1_, n2_) = (deg(a1, b1), deg(a2, b2));
            if n1_ < 1 || n2_ < 1 {
                continue;
            }
            let cb = binom_rat(b - 2, b1);
            let f1 = g1(a1, b1)? * g0(a2, b2)?;
            if !f1.is_zero() {
                s2 += f1
                    * (Rat::int(n1_) * binom_rat(a, a1)
                        + Rat::int(2 * n1_ - 5 * n2_) * binom_rat(a, a1 - 1)
                        + Rat::int(6 * n2_) * binom_rat(a, a1 - 2))
                    * cb.clone();
            }
            let f0 = g0(a1, b1)? * g0(a2, b2)?;
            if !f0.is_zero() {
                s3 += f0
                    * (Rat::int(n1_.pow(3) * (n1_ - 1)) * binom_rat(a, a1)
                        + Rat::int(n1_.pow(2) * n2_ * (2 * n1_ - 2 * n2_ + 1))
                            * binom_rat(a, a1 - 1)
                        + Rat::int(n1_ * n2_.pow(2) * (2 * n1_ - 2 * n2_ + 7))
                            * binom_rat(a, a1 - 2)
                        + Rat::int(n2_.pow(3) * (2 * n1_ + 5)) * binom_rat(a, a1 - 3)
                        + Rat::int(n2_.pow(4)) * binom_rat(a, a1 - 4))
                    * cb;
            }
        }
    }
    rest -= s2 / Rat::int(12);
    rest -= s3 / Rat::int(48);

    // three-part splittings of (a+4, b-2): elliptic x rational x rational
    let mut s4 = Rat::zero();
    for a1 in 0..=a + 4 {
        for b1 in 0..=b - 2 {
            if (a1 + 2 * b1) % 4 != 0 {
                continue;
            }
            let n1_ = deg(a1, b1);
            if n1_ < 1 {
                continue;
            }
            let f1v = g1(a1, b1)?;
            if f1v.is_zero() {
                continue;
            }
            for a2 in 0..=a + 4 - a1 {
                for b2 in 0..=b - 2 - b1 {
                    let (a3, b3) = (a + 4 - a1 - a2, b - 2 - b1 - b2);
                    if (a2 + 2 * b2) % 4 != 0 || (a3 + 2 * b3) % 4 != 0 {
                        continue;
                    }
                    let (n2_, n3_) = (deg(a2, b2), deg(a3, b3));
                    if n2_ < 1 || n3_ < 1 {
                        continue;
                    }
                    let f = f1v.clone() * g0(a2, b2)? * g0(a3, b3)?;
                    if f.is_zero() {
                        continue;
                    }
                    let m = |u: i64, v: i64| multinom3_rat(a, u, v);
                    let brace = Rat::int(3 * n2_ * n3_)
                        * (Rat::int(n2_ * n2_) * m(a2, a3 - 2)
                            + Rat::int(n3_ * n3_) * m(a2 - 2, a3))
                        + Rat::int(n1_)
                            * (Rat::int(n2_.pow(3)) * m(a2, a3 - 4)
                                + Rat::int(n2_ * n2_ * (6 * n1_ - n3_)) * m(a2 - 1, a3 - 3)
                                - Rat::int(7 * n2_ * n3_ * n3_) * m(a2 - 2, a3 - 2)
                                - Rat::int(5 * n3_.pow(3)) * m(a2 - 3, a3 - 1))
                        + (Rat::int(n2_.pow(3) * (n1_ - 5 * n3_)) * m(a2, a3 - 3)
                            + Rat::int(n2_ * n2_ * n3_ * (5 * n1_ - 7 * n3_)) * m(a2 - 1, a3 - 2)
                            + Rat::int(n2_ * n3_ * n3_ * (5 * n1_ - n3_)) * m(a2 - 2, a3 - 1)
                            + Rat::int(n3_.pow(3) * (n1_ + n3_)) * m(a2 - 3, a3));
                    s4 += f * brace * multinom3_rat(b - 2, b2, b3);
                }
            }
        }
    }
    rest -= s4 / Rat::int(12);

    Ok(-rest)
}

/// `N1[a,b] + (2n-1) N0[a,b] / 12` per key: the count of elliptic space
/// curves through `a` lines and `b` points. Errors unless every entry is a
/// non-negative integer.
pub fn space_curve_counts(
    rational: &Cp3Table,
    elliptic: &Cp3Table,
) -> Result<BTreeMap<(u32, u32), Rat>, Genus1Error> {
    let mut out = BTreeMap::new();
    for (&(a, b), n1) in &elliptic.values {
        let n = Cp3Table::degree_of(a, b) as i64;
        let n0 = rational
            .get(a as i64, b as i64)
            .map_err(|e| Genus1Error::MissingDependency(e.to_string()))?;
        let count = n1.clone() + Rat::new(2 * n - 1, 12) * n0;
        if !count.is_integer() || count.is_negative() {
            return Err(Genus1Error::NonIntegral(format!(
                "elliptic space-curve count at ({a},{b}) = {count}"
            )));
        }
        out.insert((a, b), count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genus0::{cp3_table_from_potential, km_cp2, wdvv_solve};

    fn cp3_rational(n_max: u32) -> Cp3Table {
        let fd = FrobeniusData::cp(3);
        let seeds = BTreeMap::from([(vec![0u32, 2], Rat::one())]);
        let f0 = wdvv_solve(&fd, &seeds, n_max).unwrap();
        cp3_table_from_potential(&f0, n_max).unwrap()
    }

    #[test]
    fn getzler_small_degrees() {
        let n0 = km_cp2(5).unwrap();
        let n1 = getzler_cp2(5, &n0).unwrap();
        assert_eq!(n1[&1], Rat::zero());
        assert_eq!(n1[&2], Rat::zero());
        assert_eq!(n1[&3], Rat::one());
        assert_eq!(n1[&4], Rat::int(225));
        assert_eq!(n1[&5], Rat::int(87192));
    }

    #[test]
    fn ehx_matches_getzler() {
        let n0 = km_cp2(7).unwrap();
        let a = getzler_cp2(7, &n0).unwrap();
        let b = ehx_cp2(7, &n0).unwrap();
        assert_eq!(a, b);
        assert_eq!(b[&3], Rat::one());
        assert_eq!(b[&5], Rat::int(87192));
    }

    #[test]
    fn sigma_and_eisenstein() {
        let s = elliptic_curve_sigma(12);
        assert_eq!(s[&1], Rat::one());
        assert_eq!(s[&6], Rat::int(12));
        assert_eq!(s[&12], Rat::int(28));
        let g2 = g2_series(6);
        assert_eq!(g2.constant_term(), Rat::new(-1, 24));
        assert_eq!(g2.coeff_of(&[(0, 6)]), Rat::int(12));
        assert_eq!(elliptic_f1_coefficient(6), Rat::int(2));
    }

    #[test]
    fn bcov_constants() {
        assert_eq!(bcov_linear_term(&FrobeniusData::cp(1)), Rat::new(-1, 24));
        assert_eq!(bcov_linear_term(&FrobeniusData::cp(2)), Rat::new(-1, 8));
        assert_eq!(bcov_linear_term(&FrobeniusData::cp(3)), Rat::new(-1, 4));
    }

    #[test]
    fn cp3_degree_one_and_two() {
        let n0 = cp3_rational(2);
        let n1 = cp3_elliptic_table(2, &n0).unwrap();
        assert_eq!(n1.get(0, 2).unwrap(), Rat::new(-1, 12));
        assert_eq!(n1.get(2, 1).unwrap(), Rat::new(-1, 12));
        assert_eq!(n1.get(4, 0).unwrap(), Rat::new(-1, 6));
        assert_eq!(n1.get(0, 4).unwrap(), Rat::zero());
        assert_eq!(n1.get(2, 3).unwrap(), Rat::new(-1, 4));
        assert_eq!(n1.get(4, 2).unwrap(), Rat::int(-1));
        assert_eq!(n1.get(6, 1).unwrap(), Rat::new(-9, 2));
        assert_eq!(n1.get(8, 0).unwrap(), Rat::int(-23));
    }

    #[test]
    fn cp3_relation_ops_match_table() {
        let n0 = cp3_rational(2);
        let n1 = cp3_elliptic_table(2, &n0).unwrap();
        assert_eq!(cp3_relation_b(0, 2, &n0, &n1).unwrap(), Rat::new(-1, 12));
        assert_eq!(cp3_relation_a(2, 1, &n0, &n1).unwrap(), Rat::new(-1, 12));
        assert_eq!(cp3_relation_a(8, 0, &n0, &n1).unwrap(), Rat::int(-23));
    }

    #[test]
    fn cp3_relation_ops_at_higher_degree() {
        let n0 = cp3_rational(4);
        let n1 = cp3_elliptic_table(3, &n0).unwrap();
        assert_eq!(cp3_relation_a(12, 0, &n0, &n1).unwrap(), Rat::int(-31900));
        assert_eq!(cp3_relation_b(0, 8, &n0, &n1).unwrap(), Rat::new(-4, 3));
    }

    #[test]
    fn relation_b_display_matches_slots() {
        // degree 3 exercises the three-part splittings; degree 4 checks the
        // transcription on every two-plane-reachable key once more
        let n0 = cp3_rational(4);
        let n1 = cp3_elliptic_table(4, &n0).unwrap();
        for (&(a, b), v) in &n1.values {
            if b >= 2 {
                let disp = cp3_relation_b_display(a, b, &n0, &n1).unwrap();
                assert_eq!(&disp, v, "display vs slot at ({a},{b})");
            }
        }
    }

    #[test]
    fn space_counts_low_degree() {
        let n0 = cp3_rational(3);
        let n1 = cp3_elliptic_table(3, &n0).unwrap();
        let counts = space_curve_counts(&n0, &n1).unwrap();
        // no elliptic curves of degree 1, 2; plane cubics give the first ones
        for (&(a, b), v) in &counts {
            let n = Cp3Table::degree_of(a, b);
            if n <= 2 {
                assert_eq!(*v, Rat::zero(), "({a},{b})");
            }
        }
        assert_eq!(counts[&(6, 3)], Rat::one());
        assert_eq!(counts[&(8, 2)], Rat::int(14));
        assert_eq!(counts[&(10, 1)], Rat::int(150));
        assert_eq!(counts[&(12, 0)], Rat::int(1500));
    }
}
