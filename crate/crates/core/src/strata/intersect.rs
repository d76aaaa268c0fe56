//! Intersection numbers of the nine invariant codimension-2 classes.
//!
//! The product of two stratum classes is computed by excess intersection:
//! the components of the set-theoretic intersection are the maximal common
//! degenerations `W` of the two dual graphs, the excess bundle on a
//! component is the sum of node-smoothing line bundles over the edges of `W`
//! that survive in both operands, and its top Chern class expands into
//! decorated graphs (an exponent of `-psi` at each flag). A decorated graph
//! evaluates to a product of psi-integrals over the vertex moduli, divided
//! by the order of the graph automorphism group; it vanishes unless the
//! arrow count at each vertex equals the dimension of that vertex's moduli.
//!
//! Products where both operands lie inside the irreducible boundary divisor
//! and one of them is a multiple of that divisor vanish identically (the
//! divisor can be moved off itself), and are short-circuited.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::comb::factorial_rat;
use crate::rat::Rat;
use crate::strata::classes::{class_names, invariant_classes, StratumCycle};
use crate::strata::graph::{enumerate_strata, Flag, StableGraph};

#[derive(Clone, Debug)]
pub enum StrataError {
    UnsupportedPsi { g: u32, n: u32, exps: Vec<u32> },
    ExcessPattern(String),
    NotComputable(String),
    NullspaceDimension(usize),
    Inconsistent(String),
}

impl fmt::Display for StrataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrataError::UnsupportedPsi { g, n, exps } => {
                write!(f, "psi integral outside supported table: g={g}, n={n}, exps={exps:?}")
            }
            StrataError::ExcessPattern(m) => write!(f, "excess pattern violation: {m}"),
            StrataError::NotComputable(m) => write!(f, "intersection not computable: {m}"),
            StrataError::NullspaceDimension(d) => {
                write!(f, "nullspace dimension {d}, expected 2")
            }
            StrataError::Inconsistent(m) => write!(f, "inconsistent system: {m}"),
        }
    }
}

impl std::error::Error for StrataError {}

/// Integral of `prod psi_i^{e_i}` over the moduli of genus-`g` curves with
/// `n` marked points. Zero unless the exponents sum to the dimension
/// `3(g-1)+n`. Genus 0 uses the closed multinomial form; genus 1 is
/// table-driven for `n <= 2` (all that the nine classes ever require), and
/// anything else is a loud error.
pub fn psi_integral(g: u32, n: u32, exps: &[u32]) -> Result<Rat, StrataError> {
    assert_eq!(exps.len(), n as usize, "one exponent per marked point");
    let dim = 3 * (g as i64 - 1) + n as i64;
    let total: i64 = exps.iter().map(|&e| e as i64).sum();
    if dim < 0 || total != dim {
        return Ok(Rat::zero());
    }
    match g {
        0 => {
            if n < 3 {
                return Ok(Rat::zero());
            }
            let mut v = factorial_rat(n as u64 - 3);
            for &e in exps {
                v = v / factorial_rat(e as u64);
            }
            Ok(v)
        }
        1 => {
            let mut sorted: Vec<u32> = exps.to_vec();
            sorted.sort_unstable();
            match (n, sorted.as_slice()) {
                (1, [1]) => Ok(Rat::new(1, 24)),
                (2, [1, 1]) => Ok(Rat::new(1, 24)),
                (2, [0, 2]) => Ok(Rat::new(1, 24)),
                _ => Err(StrataError::UnsupportedPsi { g, n, exps: exps.to_vec() }),
            }
        }
        _ => Err(StrataError::UnsupportedPsi { g, n, exps: exps.to_vec() }),
    }
}

/// A stable graph capped with `-psi` exponents at some of its flags.
#[derive(Clone, Debug)]
pub struct DecoratedGraph {
    pub graph: StableGraph,
    /// Exponent of `-psi` at each decorated flag.
    pub arrows: BTreeMap<Flag, u32>,
}

impl DecoratedGraph {
    /// Product over vertices of the psi-integrals of the arrow monomials,
    /// with the sign from `-psi`, divided by the automorphism order. Zero
    /// whenever some vertex's arrow count misses its moduli dimension.
    pub fn evaluate(&self) -> Result<Rat, StrataError> {
        let total_arrows: u32 = self.arrows.values().sum();
        let mut value = if total_arrows % 2 == 1 { Rat::int(-1) } else { Rat::one() };
        for v in 0..self.graph.num_vertices() {
            let n = self.graph.valence(v) as u32;
            let g = self.graph.genus(v) as u32;
            // exponents at this vertex: arrows on its flags, zeros elsewhere
            let mut exps: Vec<u32> = Vec::with_capacity(n as usize);
            for (&flag, &e) in &self.arrows {
                if self.graph.flag_vertex(flag) == v {
                    exps.push(e);
                }
            }
            let arrows_here: i64 = exps.iter().map(|&e| e as i64).sum();
            if arrows_here != self.graph.vertex_dim(v) {
                return Ok(Rat::zero());
            }
            while exps.len() < n as usize {
                exps.push(0);
            }
            value *= psi_integral(g, n, &exps)?;
        }
        Ok(value / Rat::int(self.graph.aut_order() as i64))
    }
}

/// One component of the intersection of two stratum classes: a maximal
/// common degeneration together with the edges surviving into each operand.
#[derive(Clone, Debug)]
pub struct Component {
    pub graph: StableGraph,
    /// Edges contracted to reach the first / second operand graph.
    pub contracted_a: u16,
    pub contracted_b: u16,
    /// Edge indices surviving in both operands; the excess bundle is the sum
    /// of their node-smoothing line bundles.
    pub shared_edges: Vec<usize>,
}

impl Component {
    /// Expands the top Chern class of the excess bundle into decorated
    /// graphs: one `-psi` on one side of every shared edge.
    pub fn decorations(&self) -> Vec<DecoratedGraph> {
        let mut out = vec![DecoratedGraph { graph: self.graph.clone(), arrows: BTreeMap::new() }];
        for &e in &self.shared_edges {
            let mut next = Vec::with_capacity(out.len() * 2);
            for d in &out {
                for side in 0..2 {
                    let mut arrows = d.arrows.clone();
                    *arrows.entry((e, side)).or_insert(0) += 1;
                    next.push(DecoratedGraph { graph: self.graph.clone(), arrows });
                }
            }
            out = next;
        }
        out
    }

    pub fn value(&self) -> Result<Rat, StrataError> {
        let mut total = Rat::zero();
        for d in self.decorations() {
            total += d.evaluate()?;
        }
        Ok(total)
    }
}

/// Precomputed universe of stable graphs up to codimension 4 with their
/// contraction tables; build once and reuse.
pub struct Strata {
    graphs: Vec<StableGraph>,
    keys: Vec<Vec<u8>>,
    /// per graph: map from contraction-result key to the edge subsets
    /// realizing it (the empty subset maps a graph to itself)
    contraction: Vec<HashMap<Vec<u8>, Vec<u16>>>,
}

impl Default for Strata {
    fn default() -> Self {
        Self::new()
    }
}

impl Strata {
    pub fn new() -> Self {
        let mut graphs = Vec::new();
        for codim in 2..=4 {
            graphs.extend(enumerate_strata(codim));
        }
        let keys: Vec<Vec<u8>> = graphs.iter().map(|g| g.canon_key()).collect();
        let mut contraction = Vec::with_capacity(graphs.len());
        for (g, key) in graphs.iter().zip(&keys) {
            let mut table: HashMap<Vec<u8>, Vec<u16>> = HashMap::new();
            for mask in 0u16..(1 << g.num_edges()) {
                let k = if mask == 0 { key.clone() } else { g.contract(mask).canon_key() };
                table.entry(k).or_default().push(mask);
            }
            contraction.push(table);
        }
        Strata { graphs, keys, contraction }
    }

    /// Components of the intersection of two codim-2 strata: maximal common
    /// degenerations, each with its unique pair of contraction data. Errors
    /// if a component falls outside the shared-edge excess pattern.
    pub fn pair_components(
        &self,
        a: &StableGraph,
        b: &StableGraph,
    ) -> Result<Vec<Component>, StrataError> {
        let key_a = a.canon_key();
        let key_b = b.canon_key();
        // all common degenerations, by index into the universe
        let mut common: Vec<usize> = Vec::new();
        for (i, table) in self.contraction.iter().enumerate() {
            if table.contains_key(&key_a) && table.contains_key(&key_b) {
                common.push(i);
            }
        }
        // keep the maximal ones: W is dropped when contracting some nonempty
        // edge set of W lands on another common degeneration
        let common_keys: std::collections::HashSet<&Vec<u8>> =
            common.iter().map(|&i| &self.keys[i]).collect();
        let mut components = Vec::new();
        'outer: for &i in &common {
            let w = &self.graphs[i];
            for (key, masks) in &self.contraction[i] {
                if masks.iter().any(|&m| m != 0) && common_keys.contains(key) {
                    continue 'outer;
                }
            }
            let sets_a = &self.contraction[i][&key_a];
            let sets_b = &self.contraction[i][&key_b];
            let mut found: Option<(u16, u16)> = None;
            for &ua in sets_a {
                for &ub in sets_b {
                    if ua & ub != 0 {
                        return Err(StrataError::ExcessPattern(format!(
                            "component {w:?} of {a:?} . {b:?} has overlapping contraction sets"
                        )));
                    }
                    if found.is_some() {
                        return Err(StrataError::ExcessPattern(format!(
                            "component {w:?} of {a:?} . {b:?} has multiple contraction pairs"
                        )));
                    }
                    found = Some((ua, ub));
                }
            }
            let (ua, ub) = found.expect("common degeneration must contract to both");
            let shared: Vec<usize> =
                (0..w.num_edges()).filter(|&e| (ua | ub) & (1 << e) == 0).collect();
            // excess dimension check: codim A + codim B - codim W
            let excess = (a.codim() + b.codim()) as i64 - w.codim() as i64;
            if excess != shared.len() as i64 {
                return Err(StrataError::ExcessPattern(format!(
                    "component {w:?}: excess {excess} but {} shared edges",
                    shared.len()
                )));
            }
            components.push(Component {
                graph: w.clone(),
                contracted_a: ua,
                contracted_b: ub,
                shared_edges: shared,
            });
        }
        Ok(components)
    }

    pub fn pair_value(&self, a: &StableGraph, b: &StableGraph) -> Result<Rat, StrataError> {
        let mut total = Rat::zero();
        for c in self.pair_components(a, b)? {
            total += c.value()?;
        }
        Ok(total)
    }

    /// Intersection number of two of the nine invariant classes. Requires a
    /// tree-type operand (regular embedding), except that products of two
    /// classes inside the irreducible boundary vanish by the divisor-moving
    /// argument when one operand is a multiple of that divisor.
    pub fn intersect(&self, a: &StratumCycle, b: &StratumCycle) -> Result<Rat, StrataError> {
        if !a.is_tree_type() && !b.is_tree_type() {
            if a.in_irreducible_boundary()
                && b.in_irreducible_boundary()
                && (a.is_irreducible_multiple() || b.is_irreducible_multiple())
            {
                return Ok(Rat::zero());
            }
            return Err(StrataError::NotComputable(format!(
                "{} . {}: no regular embedding and the vanishing rule does not apply",
                a.name, b.name
            )));
        }
        let mut total = Rat::zero();
        for (ga, ca) in &a.terms {
            for (gb, cb) in &b.terms {
                total += self.pair_value(ga, gb)? * (ca * cb);
            }
        }
        Ok(total)
    }

    /// The 7 x 9 intersection matrix: rows `d22..d04` against all nine
    /// classes.
    pub fn intersection_matrix(&self) -> Result<Vec<Vec<Rat>>, StrataError> {
        let classes = invariant_classes();
        let mut m = Vec::with_capacity(7);
        for row in &classes[..7] {
            let mut r = Vec::with_capacity(9);
            for col in &classes {
                r.push(self.intersect(row, col)?);
            }
            m.push(r);
        }
        Ok(m)
    }
}

/// Reduced row echelon form, in place. Returns pivot columns.
fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(matrix: &[Vec<Rat>]) -> usize {
    let mut m = matrix.to_vec();
    rref(&mut m).len()
}

/// Exact basis of the right nullspace; errors unless the dimension is
/// exactly 2 (one known relation plus one new one).
pub fn nullspace_relations(matrix: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, StrataError> {
    let cols = matrix[0].len();
    let mut m = matrix.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -m[row][f].clone();
        }
        basis.push(v);
    }
    if basis.len() != 2 {
        return Err(StrataError::NullspaceDimension(basis.len()));
    }
    Ok(basis)
}

/// Scales to a primitive integer vector with positive leading entry.
pub fn primitive_integer_form(v: &[Rat]) -> Vec<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> =
        v.iter().map(|x| (x.clone() * Rat::from_bigint(lcm.clone())).to_integer().unwrap()).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let leading_negative = ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative());
    let scale = if leading_negative { -gcd } else { gcd };
    ints.into_iter().map(|n| Rat::from_bigint(n / scale.clone())).collect()
}

/// The two relations in the S4-invariant form: the vector vanishing on the
/// first class (the classically known relation) and the vector vanishing on
/// the `d02` slot (the new relation), both primitive integer vectors.
pub fn canonical_relations(basis: &[Vec<Rat>]) -> Result<(Vec<Rat>, Vec<Rat>), StrataError> {
    let [u, w] = basis else {
        return Err(StrataError::NullspaceDimension(basis.len()));
    };
    let zero_at = |slot: usize| -> Result<Vec<Rat>, StrataError> {
        // combination a*u + b*w with coordinate `slot` = 0
        let (cu, cw) = (u[slot].clone(), w[slot].clone());
        let v: Vec<Rat> = if cu.is_zero() {
            u.clone()
        } else if cw.is_zero() {
            w.clone()
        } else {
            u.iter().zip(w).map(|(a, b)| a.clone() * cw.clone() - b.clone() * cu.clone()).collect()
        };
        if v.iter().all(|x| x.is_zero()) {
            return Err(StrataError::Inconsistent(format!(
                "nullspace degenerate at slot {slot}"
            )));
        }
        Ok(primitive_integer_form(&v))
    };
    let known = zero_at(0)?; // no d22 component
    let new = zero_at(4)?; // no d02 component
    Ok((known, new))
}

/// Completes the 7 x 9 matrix to the full symmetric 9 x 9 one: the three
/// unknown pairings among `alpha` and `beta` are forced by pairing the
/// relations against the last two rows. The four resulting equations in
/// three unknowns must be consistent.
pub fn complete_matrix(
    m: &[Vec<Rat>],
    relations: &[Vec<Rat>],
) -> Result<Vec<Vec<Rat>>, StrataError> {
    assert_eq!(m.len(), 7);
    assert!(m.iter().all(|r| r.len() == 9));
    let mut full: Vec<Vec<Rat>> = vec![vec![Rat::zero(); 9]; 9];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            full[i][j] = x.clone();
            full[j][i] = x.clone();
        }
    }
    // unknowns: x0 = alpha.alpha, x1 = alpha.beta, x2 = beta.beta
    let mut eqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for r in relations {
        assert_eq!(r.len(), 9);
        for (row, ia, ib) in [(7usize, 0usize, 1usize), (8, 1, 2)] {
            let mut coeff = vec![Rat::zero(); 3];
            coeff[ia] += r[7].clone();
            coeff[ib] += r[8].clone();
            let known: Rat = (0..7).map(|j| full[row][j].clone() * r[j].clone()).sum();
            eqs.push((coeff, -known));
        }
    }
    // solve the little system exactly
    let mut aug: Vec<Vec<Rat>> = eqs
        .iter()
        .map(|(c, rhs)| {
            let mut row = c.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&3) {
        return Err(StrataError::Inconsistent("relation system has no solution".into()));
    }
    if pivots.len() < 3 {
        return Err(StrataError::Inconsistent("relation system underdetermined".into()));
    }
    let mut x = vec![Rat::zero(); 3];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][3].clone();
    }
    full[7][7] = x[0].clone();
    full[7][8] = x[1].clone();
    full[8][7] = x[1].clone();
    full[8][8] = x[2].clone();
    // every relation must annihilate the completed matrix
    for r in relations {
        for row in &full {
            let dot: Rat = row.iter().zip(r).map(|(a, b)| a.clone() * b.clone()).sum();
            if !dot.is_zero() {
                return Err(StrataError::Inconsistent(
                    "completed matrix does not annihilate a relation".into(),
                ));
            }
        }
    }
    Ok(full)
}

/// Convenience: full pipeline from scratch. Returns (classes order, 7x9
/// matrix, the two canonical relations, completed 9x9 matrix).
pub type IntersectionTheory =
    ([&'static str; 9], Vec<Vec<Rat>>, (Vec<Rat>, Vec<Rat>), Vec<Vec<Rat>>);

pub fn full_intersection_theory() -> Result<IntersectionTheory, StrataError> {
    let ctx = Strata::new();
    let m = ctx.intersection_matrix()?;
    let basis = nullspace_relations(&m)?;
    let relations = canonical_relations(&basis)?;
    let completed = complete_matrix(&m, &[relations.0.clone(), relations.1.clone()])?;
    Ok((class_names(), m, relations, completed))
}
