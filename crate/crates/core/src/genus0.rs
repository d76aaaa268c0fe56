//! Genus-0 invariants of projective spaces.
//!
//! Two independent routes are implemented. For the plane there is the
//! closed-form recursion
//! `N_n = sum_{i+j=n} (C(3n-4,3i-2) i^2 j^2 - i^3 j C(3n-4,3i-1)) N_i N_j`
//! with `N_1 = 1`. For any projective space whose cohomology is generated by
//! the hyperplane class there is a coefficient solver that imposes the
//! associativity (WDVV) equations on the genus-0 potential degree by degree,
//! starting from the seed invariants of degree 1.
//!
//! The potential is stored over the variable `x = q e^{t1}` plus an explicit
//! classical cubic in `t0, t1`: every quantum term depends on `q` and `t1`
//! only through `q^n e^{n t1}`, so the divisor direction is exact rather
//! than truncated, and `d/dt1` acts on the quantum part as the Euler
//! operator `x d/dx`.

use std::collections::BTreeMap;
use std::fmt;

use crate::comb::{binom_rat, factorial_rat};
use crate::rat::Rat;
use crate::series::{Expo, TruncSeries, VarSpec};

#[derive(Clone, Debug)]
pub enum Genus0Error {
    InsufficientSeeds(String),
    InconsistentSeeds(String),
    MissingDependency(String),
    NotEnumerative(String),
}

impl fmt::Display for Genus0Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus0Error::InsufficientSeeds(m) => write!(f, "insufficient seeds: {m}"),
            Genus0Error::InconsistentSeeds(m) => write!(f, "inconsistent seeds: {m}"),
            Genus0Error::MissingDependency(m) => write!(f, "missing dependency: {m}"),
            Genus0Error::NotEnumerative(m) => {
                write!(f, "value fails integrality/positivity: {m}")
            }
        }
    }
}

impl std::error::Error for Genus0Error {}

/// Frobenius data of a projective space `CP^d`: Poincare pairing, its
/// inverse, and the two Chern pairings the genus-1 theory needs.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    /// Projective dimension `d`; the basis is `1, w, ..., w^d`.
    pub dim: usize,
    /// Cohomological degrees `0, 2, ..., 2d`.
    pub basis_degrees: Vec<i64>,
    pub pairing: Vec<Vec<Rat>>,
    pub pairing_inverse: Vec<Vec<Rat>>,
    /// `c_1(V) . line = d + 1`.
    pub c1_pairing: i64,
    /// `int c_{d-1}(V) cup w = C(d+1, 2)`.
    pub chern_pairing: i64,
    /// Coefficient of `-t1` in the genus-1 potential: `chern_pairing / 24`.
    pub bcov_constant: Rat,
}

impl FrobeniusData {
    pub fn cp(d: usize) -> Self {
        assert!((1..=3).contains(&d), "only CP^1..CP^3 are supported");
        let n = d + 1;
        let mut pairing = vec![vec![Rat::zero(); n]; n];
        for a in 0..n {
            pairing[a][d - a] = Rat::one();
        }
        let chern = (crate::comb::binom(d as i64 + 1, 2))
            .try_into()
            .expect("small Chern pairing");
        let fd = FrobeniusData {
            dim: d,
            basis_degrees: (0..n).map(|a| 2 * a as i64).collect(),
            pairing_inverse: pairing.clone(), // antidiagonal unit is self-inverse
            pairing,
            c1_pairing: d as i64 + 1,
            chern_pairing: chern,
            bcov_constant: Rat::new(chern, 24),
        };
        debug_assert!(fd.pairing_is_involutive());
        fd
    }

    fn pairing_is_involutive(&self) -> bool {
        let n = self.dim + 1;
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for k in 0..n {
                    s += self.pairing[i][k].clone() * self.pairing_inverse[k][j].clone();
                }
                if s != if i == j { Rat::one() } else { Rat::zero() } {
                    return false;
                }
            }
        }
        true
    }
}

/// Kontsevich-Manin recursion for rational plane curves. Returns the map
/// `n -> N_n` for `1 <= n <= n_max`.
pub fn km_cp2(n_max: u32) -> Result<BTreeMap<u32, Rat>, Genus0Error> {
    if n_max < 1 {
        return Err(Genus0Error::MissingDependency("n_max must be at least 1".into()));
    }
    let mut table: BTreeMap<u32, Rat> = BTreeMap::new();
    table.insert(1, Rat::one());
    for n in 2..=n_max {
        let n_i = n as i64;
        let mut acc = Rat::zero();
        for i in 1..n {
            let j = n - i;
            let (ii, jj) = (i as i64, j as i64);
            let c1 = binom_rat(3 * n_i - 4, 3 * ii - 2) * Rat::int(ii * ii * jj * jj);
            let c2 = binom_rat(3 * n_i - 4, 3 * ii - 1) * Rat::int(ii * ii * ii * jj);
            acc += (c1 - c2) * table[&i].clone() * table[&j].clone();
        }
        table.insert(n, acc);
    }
    for (n, v) in &table {
        if !v.is_integer() || v.is_negative() {
            return Err(Genus0Error::NotEnumerative(format!("N0[{n}] = {v}")));
        }
    }
    Ok(table)
}

/// Variable layout of a potential over `t0, t1, x, t2, ..., td`.
#[derive(Clone, Debug)]
pub struct PotentialVars {
    pub dim: usize,
    pub x_cap: i32,
}

pub const VAR_T0: usize = 0;
pub const VAR_T1: usize = 1;
pub const VAR_X: usize = 2;

impl PotentialVars {
    pub fn new(dim: usize, x_cap: i32) -> Self {
        PotentialVars { dim, x_cap }
    }

    /// Index of `t_a` in the variable list.
    pub fn t(&self, a: usize) -> usize {
        assert!(a <= self.dim);
        match a {
            0 => VAR_T0,
            1 => VAR_T1,
            _ => a + 1,
        }
    }

    pub fn specs(&self) -> (Vec<VarSpec>, Vec<i32>) {
        // The potential is exact in every direction except x (classical part
        // polynomial, t-degrees bounded by the x-degree), so those caps sit
        // above the true degrees with margin for derivative-chain cap decay.
        let d = self.dim as i64;
        let margin = 16;
        let mut vars = vec![
            VarSpec::new("t0", -2),
            VarSpec::new("t1", 0),
            VarSpec::new("x", -2 * (d + 1)),
        ];
        let mut caps = vec![2 + margin, 3 + margin, self.x_cap];
        for a in 2..=self.dim {
            vars.push(VarSpec::new(&format!("t{a}"), 2 * a as i64 - 2));
            // t_a exponents are bounded by the degree-d quantum terms
            caps.push(self.x_cap * (2 * (self.dim as i32) + 2) / (2 * a as i32 - 2) + 1 + margin);
        }
        (vars, caps)
    }

    pub fn zero_series(&self) -> TruncSeries {
        let (vars, caps) = self.specs();
        TruncSeries::zero(vars, caps)
    }

    /// `d/dt_a` with the divisor direction routed through `x`: on the
    /// quantum part `d/dt1 = x d/dx`.
    pub fn d_dt(&self, s: &TruncSeries, a: usize) -> TruncSeries {
        if a == 1 {
            s.derive(VAR_T1).add(&euler(s, VAR_X))
        } else {
            s.derive(self.t(a))
        }
    }
}

/// The Euler operator `v d/dv`: multiplies each term by its `v`-exponent.
/// Exact (no cap loss), unlike `derive` followed by multiplication.
pub fn euler(s: &TruncSeries, var: usize) -> TruncSeries {
    let mut out = TruncSeries::zero_like(s);
    for (e, c) in s.terms() {
        let k = e.get(var);
        if k != 0 {
            out.add_term(e.clone(), c * &Rat::int(k as i64));
        }
    }
    out
}

/// Classical cubic part `(1/6) sum (int g^a g^b g^c) t_a t_b t_c` of the
/// genus-0 potential of `CP^d`.
pub fn classical_potential(pv: &PotentialVars) -> TruncSeries {
    let d = pv.dim;
    let mut s = pv.zero_series();
    for a in 0..=d {
        for b in a..=d {
            for c in b..=d {
                if a + b + c != d {
                    continue;
                }
                // multiplicity of the ordered triples over the monomial
                let perms = if a == b && b == c {
                    1
                } else if a == b || b == c || a == c {
                    3
                } else {
                    6
                };
                let mut expo: BTreeMap<usize, i32> = BTreeMap::new();
                for idx in [a, b, c] {
                    *expo.entry(pv.t(idx)).or_insert(0) += 1;
                }
                let pairs: Vec<(usize, i32)> = expo.into_iter().collect();
                s.add_term(Expo::of(&pairs), Rat::new(perms, 6));
            }
        }
    }
    s
}

/// Exponent tuples `(e_2, ..., e_d)` of the degree-`n` quantum terms, fixed
/// by homogeneity of the potential.
pub fn quantum_keys(dim: usize, n: u32) -> Vec<Vec<u32>> {
    let target = 2 * (dim as i64 - 3) + 2 * (dim as i64 + 1) * n as i64;
    let mut keys = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>, i64)> = vec![(2, Vec::new(), 0)];
    while let Some((a, prefix, sum)) = stack.pop() {
        if a > dim {
            if sum == target {
                keys.push(prefix);
            }
            continue;
        }
        let w = 2 * a as i64 - 2;
        let mut e = 0u32;
        loop {
            let s = sum + w * e as i64;
            if s > target {
                break;
            }
            let mut p = prefix.clone();
            p.push(e);
            stack.push((a + 1, p, s));
            e += 1;
        }
    }
    keys.sort();
    keys
}

fn quantum_monomial_expo(pv: &PotentialVars, n: u32, key: &[u32]) -> Expo {
    let mut pairs = vec![(VAR_X, n as i32)];
    for (i, &e) in key.iter().enumerate() {
        if e > 0 {
            pairs.push((pv.t(i + 2), e as i32));
        }
    }
    Expo::of(&pairs)
}

/// `1 / prod e_i!` — the coefficient normalization of a quantum term, so that
/// the stored invariant is the plain count.
fn key_weight(key: &[u32]) -> Rat {
    let mut w = Rat::one();
    for &e in key {
        w = w / factorial_rat(e as u64);
    }
    w
}

struct ThirdDerivs {
    dim: usize,
    /// `tensor[a][b][c]` with `a <= b <= c`
    tensor: BTreeMap<(usize, usize, usize), TruncSeries>,
}

impl ThirdDerivs {
    fn new(pv: &PotentialVars, f: &TruncSeries) -> Self {
        let d = pv.dim;
        let mut tensor = BTreeMap::new();
        for a in 0..=d {
            let fa = pv.d_dt(f, a);
            for b in a..=d {
                let fab = pv.d_dt(&fa, b);
                for c in b..=d {
                    tensor.insert((a, b, c), pv.d_dt(&fab, c));
                }
            }
        }
        ThirdDerivs { dim: d, tensor }
    }

    fn get(&self, mut a: usize, mut b: usize, mut c: usize) -> &TruncSeries {
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if b > c {
            std::mem::swap(&mut b, &mut c);
        }
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        debug_assert!(c <= self.dim);
        &self.tensor[&(a, b, c)]
    }
}

/// The associativity residual
/// `sum_{e,f} F_abe eta^{ef} F_fcd - (b <-> c)` as a series; identically
/// zero within caps exactly when the potential satisfies WDVV.
pub fn wdvv_residual(
    f0: &TruncSeries,
    fd: &FrobeniusData,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> TruncSeries {
    let pv = PotentialVars::new(fd.dim, f0.caps()[VAR_X]);
    let derivs = ThirdDerivs::new(&pv, f0);
    residual_from_derivs(&derivs, fd, a, b, c, d)
}

fn residual_from_derivs(
    derivs: &ThirdDerivs,
    fd: &FrobeniusData,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> TruncSeries {
    let dim = fd.dim;
    let mut acc: Option<TruncSeries> = None;
    for e in 0..=dim {
        for f in 0..=dim {
            let eta = &fd.pairing_inverse[e][f];
            if eta.is_zero() {
                continue;
            }
            let plus = derivs.get(a, b, e).mul(derivs.get(f, c, d)).scale(eta);
            let minus = derivs.get(a, c, e).mul(derivs.get(f, b, d)).scale(eta);
            let term = plus.sub(&minus);
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            });
        }
    }
    acc.expect("nonempty pairing")
}

/// Bilinear part of the residual between two potentials (used to linearize
/// the solver in the unknown coefficients).
fn residual_bilinear(
    p: &ThirdDerivs,
    q: &ThirdDerivs,
    fd: &FrobeniusData,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> TruncSeries {
    let dim = fd.dim;
    let mut acc: Option<TruncSeries> = None;
    for e in 0..=dim {
        for f in 0..=dim {
            let eta = &fd.pairing_inverse[e][f];
            if eta.is_zero() {
                continue;
            }
            let mut term = p.get(a, b, e).mul(q.get(f, c, d));
            term = term.add(&q.get(a, b, e).mul(p.get(f, c, d)));
            term = term.sub(&p.get(a, c, e).mul(q.get(f, b, d)));
            term = term.sub(&q.get(a, c, e).mul(p.get(f, b, d)));
            acc = Some(match acc {
                None => term.scale(eta),
                Some(s) => s.add(&term.scale(eta)),
            });
        }
    }
    acc.expect("nonempty pairing")
}

fn slice_at_x(s: &TruncSeries, n: u32) -> BTreeMap<Expo, Rat> {
    s.terms()
        .filter(|(e, _)| e.get(VAR_X) == n as i32)
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect()
}

/// Solves the genus-0 potential of `CP^d` from the WDVV equations.
///
/// `seeds` maps insertion-exponent tuples `(e_2, ..., e_d)` of degree-1
/// terms to their invariants (`CP^3`: two-point count 1 at `(0,2)`; `CP^2`:
/// 1 at `(2)`; `CP^1`: 1 at the empty tuple). Unknown coefficients are
/// eliminated degree by degree from the residual equations, scanned in a
/// fixed lexicographic order; after each final solve every residual equation
/// is verified to vanish identically within caps, so redundancy acts as a
/// free correctness check.
pub fn wdvv_solve(
    fd: &FrobeniusData,
    seeds: &BTreeMap<Vec<u32>, Rat>,
    degree_max: u32,
) -> Result<TruncSeries, Genus0Error> {
    let pv = PotentialVars::new(fd.dim, degree_max as i32);
    let mut potential = classical_potential(&pv);
    let classical_derivs = ThirdDerivs::new(&pv, &potential);
    let dim = fd.dim;

    let tuples: Vec<(usize, usize, usize, usize)> = {
        let mut v = Vec::new();
        for a in 0..=dim {
            for b in 0..=dim {
                for c in b + 1..=dim {
                    for d in 0..=dim {
                        v.push((a, b, c, d));
                    }
                }
            }
        }
        v
    };

    for n in 1..=degree_max {
        let keys = quantum_keys(dim, n);
        let mut unknowns: Vec<Vec<u32>> = Vec::new();
        for key in &keys {
            if n == 1 {
                if let Some(v) = seeds.get(key) {
                    potential.add_term(
                        quantum_monomial_expo(&pv, n, key),
                        v.clone() * key_weight(key),
                    );
                    continue;
                }
            }
            unknowns.push(key.clone());
        }
        if unknowns.is_empty() {
            continue;
        }

        // linear response of the residual to each unknown (cross terms with
        // the classical cubic are the only ones landing at x^n)
        let probes: Vec<ThirdDerivs> = unknowns
            .iter()
            .map(|key| {
                let mut m = TruncSeries::zero_like(&potential);
                m.add_term(quantum_monomial_expo(&pv, n, key), key_weight(key));
                ThirdDerivs::new(&pv, &m)
            })
            .collect();

        let base_derivs = ThirdDerivs::new(&pv, &potential);
        // incremental exact Gaussian elimination over the unknowns
        let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new(); // echelon rows
        let mut pivot_of_row: Vec<usize> = Vec::new();
        let mut solved_count = 0usize;

        'tuples: for &(a, b, c, d) in &tuples {
            let base = residual_from_derivs(&base_derivs, fd, a, b, c, d);
            let consts = slice_at_x(&base, n);
            let lin: Vec<BTreeMap<Expo, Rat>> = probes
                .iter()
                .map(|p| slice_at_x(&residual_bilinear(&classical_derivs, p, fd, a, b, c, d), n))
                .collect();
            let mut monomials: std::collections::BTreeSet<Expo> =
                consts.keys().cloned().collect();
            for l in &lin {
                monomials.extend(l.keys().cloned());
            }
            for m in monomials {
                let mut coeffs: Vec<Rat> = lin
                    .iter()
                    .map(|l| l.get(&m).cloned().unwrap_or_else(Rat::zero))
                    .collect();
                let mut rhs = -consts.get(&m).cloned().unwrap_or_else(Rat::zero);
                // reduce against existing echelon rows
                for (row, &p) in rows.iter().zip(&pivot_of_row) {
                    if !coeffs[p].is_zero() {
                        let f = coeffs[p].clone();
                        for (x, y) in coeffs.iter_mut().zip(&row.0) {
                            *x = x.clone() - f.clone() * y.clone();
                        }
                        rhs -= f * row.1.clone();
                    }
                }
                match coeffs.iter().position(|c| !c.is_zero()) {
                    Some(p) => {
                        let inv = coeffs[p].recip();
                        for x in coeffs.iter_mut() {
                            *x = x.clone() * inv.clone();
                        }
                        let rhs = rhs * inv;
                        rows.push((coeffs, rhs));
                        pivot_of_row.push(p);
                        solved_count += 1;
                        if solved_count == unknowns.len() {
                            break 'tuples;
                        }
                    }
                    None => {
                        if !rhs.is_zero() {
                            return Err(Genus0Error::InconsistentSeeds(format!(
                                "degree {n}: residual ({a},{b},{c},{d}) cannot vanish"
                            )));
                        }
                    }
                }
            }
        }
        if solved_count < unknowns.len() {
            return Err(Genus0Error::InsufficientSeeds(format!(
                "degree {n}: {} of {} coefficients undetermined",
                unknowns.len() - solved_count,
                unknowns.len()
            )));
        }
        // back-substitute the echelon rows
        let mut values = vec![Rat::zero(); unknowns.len()];
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(pivot_of_row[i]));
        for &i in &order {
            let (row, rhs) = &rows[i];
            let p = pivot_of_row[i];
            let mut v = rhs.clone();
            for j in p + 1..unknowns.len() {
                v -= row[j].clone() * values[j].clone();
            }
            values[p] = v;
        }
        for (key, v) in unknowns.iter().zip(values) {
            potential.add_term(quantum_monomial_expo(&pv, n, key), v * key_weight(key));
        }
    }

    // every residual equation must vanish identically within caps
    let derivs = ThirdDerivs::new(&pv, &potential);
    for &(a, b, c, d) in &tuples {
        let r = residual_from_derivs(&derivs, fd, a, b, c, d);
        if !r.is_zero() {
            return Err(Genus0Error::InconsistentSeeds(format!(
                "solved potential leaves residual ({a},{b},{c},{d}) nonzero"
            )));
        }
    }
    Ok(potential)
}

/// Reads the quantum coefficients back out of a solved potential:
/// `key -> invariant` per degree `n`, with `(n, key)` flattened per space.
pub fn table_from_potential(
    fd: &FrobeniusData,
    f0: &TruncSeries,
    degree_max: u32,
) -> BTreeMap<(u32, Vec<u32>), Rat> {
    let pv = PotentialVars::new(fd.dim, degree_max as i32);
    let mut out = BTreeMap::new();
    for n in 1..=degree_max {
        for key in quantum_keys(fd.dim, n) {
            let c = f0.coeff(&quantum_monomial_expo(&pv, n, &key));
            out.insert((n, key.clone()), c / key_weight(&key));
        }
    }
    out
}

/// Plane table `n -> N_n` from a solved `CP^2` potential.
pub fn cp2_table_from_potential(
    f0: &TruncSeries,
    degree_max: u32,
) -> BTreeMap<u32, Rat> {
    let fd = FrobeniusData::cp(2);
    table_from_potential(&fd, f0, degree_max)
        .into_iter()
        .map(|((n, _), v)| (n, v))
        .collect()
}

/// Space table `(a, b) -> N_ab` (lines and points met) from a solved `CP^3`
/// potential. Checks enumerativity: every entry must be a
/// non-negative integer.
pub fn cp3_table_from_potential(
    f0: &TruncSeries,
    degree_max: u32,
) -> Result<Cp3Table, Genus0Error> {
    let fd = FrobeniusData::cp(3);
    let mut map = BTreeMap::new();
    for ((_, key), v) in table_from_potential(&fd, f0, degree_max) {
        if !v.is_integer() || v.is_negative() {
            return Err(Genus0Error::NotEnumerative(format!("N0[{key:?}] = {v}")));
        }
        map.insert((key[0], key[1]), v);
    }
    Ok(Cp3Table { values: map })
}

/// Table of `CP^3` invariants keyed by `(a, b)`: `a` lines and `b` points,
/// `a + 2b = 4n`.
#[derive(Clone, Debug, Default)]
pub struct Cp3Table {
    pub values: BTreeMap<(u32, u32), Rat>,
}

impl Cp3Table {
    /// Lookup treating structurally-invalid indices (negative, odd `a`, or
    /// degree not a positive multiple of 4) as zero, and genuinely absent
    /// in-range keys as an error.
    pub fn get(&self, a: i64, b: i64) -> Result<Rat, Genus0Error> {
        if a < 0 || b < 0 {
            return Ok(Rat::zero());
        }
        let deg = a + 2 * b;
        if deg == 0 || deg % 4 != 0 {
            return Ok(Rat::zero());
        }
        self.values
            .get(&(a as u32, b as u32))
            .cloned()
            .ok_or_else(|| Genus0Error::MissingDependency(format!("N[{a},{b}] not computed")))
    }

    pub fn degree_of(a: u32, b: u32) -> u32 {
        (a + 2 * b) / 4
    }
}
