//! Stable graphs of genus 1 with four labelled tails.
//!
//! A stable graph is the dual graph of a stable nodal curve: vertices carry
//! genera, edges are nodes (loops and parallel edges allowed), and the four
//! tails are the marked points. Total genus = first Betti number plus the sum
//! of vertex genera; stability requires every genus-0 vertex to support at
//! least three special points and every genus-1 vertex at least one.
//!
//! Graphs are kept in a canonical labelling so that isomorphism (respecting
//! tail labels) is plain equality. Automorphism orders are counted at the
//! flag level: swapping the two half-edges of a loop and permuting parallel
//! edges are automorphisms even when the vertex permutation is trivial.

use std::collections::{BTreeSet, HashMap};

pub const NUM_TAILS: usize = 4;

/// A flag is one end of an edge: `(edge index, side)` with side 0 or 1.
pub type Flag = (usize, usize);

/// Vertex-relabelled form of a graph: genera, tail placement, sorted edges.
type Encoding = (Vec<u8>, [usize; NUM_TAILS], Vec<(usize, usize)>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    /// Genus of each vertex (0 or 1 here).
    genera: Vec<u8>,
    /// `tails[i]` is the vertex carrying tail `i+1`.
    tails: [usize; NUM_TAILS],
    /// Unordered edges `(u, v)` with `u <= v`; loops are `(v, v)`.
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    /// Builds and canonicalizes. Panics unless connected, of total genus 1,
    /// and stable.
    pub fn new(genera: Vec<u8>, tails: [usize; NUM_TAILS], edges: Vec<(usize, usize)>) -> Self {
        let g = StableGraph {
            genera,
            tails,
            edges: edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect(),
        };
        assert!(g.is_connected(), "graph must be connected");
        assert_eq!(g.total_genus(), 1, "total genus must be 1");
        assert!(g.is_stable(), "graph must be stable");
        g.canonical()
    }

    fn from_parts_unchecked(
        genera: Vec<u8>,
        tails: [usize; NUM_TAILS],
        mut edges: Vec<(usize, usize)>,
    ) -> Self {
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        StableGraph { genera, tails, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Codimension of the stratum = number of edges.
    pub fn codim(&self) -> usize {
        self.edges.len()
    }

    pub fn genus(&self, v: usize) -> u8 {
        self.genera[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn tails(&self) -> &[usize; NUM_TAILS] {
        &self.tails
    }

    pub fn flag_vertex(&self, f: Flag) -> usize {
        let (e, side) = f;
        if side == 0 {
            self.edges[e].0
        } else {
            self.edges[e].1
        }
    }

    /// Number of special points at `v`: tails plus edge ends (a loop counts
    /// twice).
    pub fn valence(&self, v: usize) -> usize {
        let t = self.tails.iter().filter(|&&w| w == v).count();
        let e: usize = self
            .edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum();
        t + e
    }

    /// Dimension of the moduli factor at `v`: `3(g-1) + n`.
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * (self.genera[v] as i64 - 1) + self.valence(v) as i64
    }

    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices()
    }

    pub fn total_genus(&self) -> usize {
        self.betti() + self.genera.iter().map(|&g| g as usize).sum::<usize>()
    }

    /// True when the dual graph is a tree with all genus carried by vertices;
    /// such strata embed regularly.
    pub fn is_tree(&self) -> bool {
        self.betti() == 0
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| match self.genera[v] {
            0 => self.valence(v) >= 3,
            _ => self.valence(v) >= 1,
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn encoding_under(&self, perm: &[usize]) -> Encoding {
        let n = self.num_vertices();
        let mut genera = vec![0u8; n];
        for (v, &g) in self.genera.iter().enumerate() {
            genera[perm[v]] = g;
        }
        let mut tails = [0usize; NUM_TAILS];
        for (i, &v) in self.tails.iter().enumerate() {
            tails[i] = perm[v];
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        (genera, tails, edges)
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut perms = vec![vec![]];
        for k in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        // convert: perm[old] = new
        perms
            .into_iter()
            .map(|order| {
                let mut perm = vec![0usize; n];
                for (new, &old) in order.iter().enumerate() {
                    perm[old] = new;
                }
                perm
            })
            .collect()
    }

    /// Relabels vertices to the lexicographically least encoding.
    pub fn canonical(&self) -> StableGraph {
        let n = self.num_vertices();
        let mut best: Option<Encoding> = None;
        for perm in Self::permutations(n) {
            let enc = self.encoding_under(&perm);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
        let (genera, tails, edges) = best.unwrap();
        StableGraph { genera, tails, edges }
    }

    /// Compact hashable identity of the isomorphism class.
    pub fn canon_key(&self) -> Vec<u8> {
        let g = self.canonical();
        let mut key = vec![g.num_vertices() as u8];
        key.extend(&g.genera);
        key.extend(g.tails.iter().map(|&v| v as u8));
        for &(u, v) in &g.edges {
            key.push(u as u8);
            key.push(v as u8);
        }
        key
    }

    pub fn is_isomorphic(&self, other: &StableGraph) -> bool {
        self.canon_key() == other.canon_key()
    }

    /// Order of the automorphism group fixing tails pointwise, counted on
    /// flags: vertex symmetries times `m!` per parallel-edge family times
    /// `2^l l!` for `l` loops at a vertex.
    pub fn aut_order(&self) -> u64 {
        let own = self.encoding_under(&(0..self.num_vertices()).collect::<Vec<_>>());
        let vertex_syms = Self::permutations(self.num_vertices())
            .into_iter()
            .filter(|p| self.encoding_under(p) == own)
            .count() as u64;
        let mut mult: HashMap<(usize, usize), u64> = HashMap::new();
        for &e in &self.edges {
            *mult.entry(e).or_insert(0) += 1;
        }
        let mut factor = 1u64;
        for (&(u, v), &m) in &mult {
            let perms: u64 = (1..=m).product();
            factor *= perms;
            if u == v {
                factor *= 1 << m; // each loop's two half-edges can swap
            }
        }
        vertex_syms * factor
    }

    /// Contracts the edges selected by `mask` (bit `i` = edge `i`). A
    /// contracted loop or cycle adds its first Betti number to the genus of
    /// the merged vertex. Returns the canonical form.
    pub fn contract(&self, mask: u16) -> StableGraph {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        // compact numbering of classes
        let mut class_of = vec![0usize; n];
        let mut next = 0usize;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (v, slot) in class_of.iter_mut().enumerate() {
            let r = find(&mut parent, v);
            let c = *seen.entry(r).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
            *slot = c;
        }
        // genus per class: vertex genera plus b1 of the contracted subgraph
        let mut genera = vec![0i64; next];
        let mut class_size = vec![0i64; next];
        for v in 0..n {
            genera[class_of[v]] += self.genera[v] as i64;
            class_size[class_of[v]] += 1;
        }
        for (i, &(u, _)) in self.edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                genera[class_of[u]] += 1;
            }
        }
        for c in 0..next {
            genera[c] -= class_size[c] - 1;
        }
        let genera: Vec<u8> = genera.into_iter().map(|g| g as u8).collect();
        let mut tails = [0usize; NUM_TAILS];
        for (i, &v) in self.tails.iter().enumerate() {
            tails[i] = class_of[v];
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) == 0)
            .map(|(_, &(u, v))| (class_of[u], class_of[v]))
            .collect();
        StableGraph::from_parts_unchecked(genera, tails, edges).canonical()
    }

    /// All one-edge degenerations (canonical, deduplicated): convert a
    /// genus-1 vertex into a genus-0 vertex with a loop, or split a vertex in
    /// two, distributing its genus, tails and half-edges.
    pub fn degenerations(&self) -> Vec<StableGraph> {
        let mut out: HashMap<Vec<u8>, StableGraph> = HashMap::new();
        let mut push = |g: StableGraph| {
            if g.is_stable() {
                out.entry(g.canon_key()).or_insert(g);
            }
        };

        for v in 0..self.num_vertices() {
            if self.genera[v] == 1 {
                let mut genera = self.genera.clone();
                genera[v] = 0;
                let mut edges = self.edges.clone();
                edges.push((v, v));
                push(StableGraph::from_parts_unchecked(genera, self.tails, edges).canonical());
            }
        }

        for v in 0..self.num_vertices() {
            // attachments at v: tail slots and edge half-edges
            enum At {
                Tail(usize),
                End(usize, usize), // edge index, side
            }
            let mut at: Vec<At> = Vec::new();
            for (i, &tv) in self.tails.iter().enumerate() {
                if tv == v {
                    at.push(At::Tail(i));
                }
            }
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                if a == v {
                    at.push(At::End(i, 0));
                }
                if b == v {
                    at.push(At::End(i, 1));
                }
            }
            let genus_splits: &[(u8, u8)] = if self.genera[v] == 1 {
                &[(0, 1), (1, 0)]
            } else {
                &[(0, 0)]
            };
            let w = self.num_vertices();
            for &(g1, g2) in genus_splits {
                for subset in 0u32..(1 << at.len()) {
                    let mut genera = self.genera.clone();
                    genera[v] = g1;
                    genera.push(g2);
                    let mut tails = self.tails;
                    let mut edges = self.edges.clone();
                    for (k, a) in at.iter().enumerate() {
                        if subset & (1 << k) != 0 {
                            match *a {
                                At::Tail(i) => tails[i] = w,
                                At::End(i, side) => {
                                    if side == 0 {
                                        edges[i].0 = w;
                                    } else {
                                        edges[i].1 = w;
                                    }
                                }
                            }
                        }
                    }
                    edges.push((v, w));
                    push(StableGraph::from_parts_unchecked(genera, tails, edges).canonical());
                }
            }
        }

        let mut v: Vec<StableGraph> = out.into_values().collect();
        v.sort_unstable();
        v
    }
}

/// All isomorphism classes of stable genus-1 graphs with tails `{1..4}` and
/// exactly `codim` edges.
pub fn enumerate_strata(codim: usize) -> Vec<StableGraph> {
    assert!(codim <= 4, "codimension must be 0..=4");
    let mut level = vec![StableGraph::new(vec![1], [0; NUM_TAILS], vec![])];
    for _ in 0..codim {
        let mut next: HashMap<Vec<u8>, StableGraph> = HashMap::new();
        for g in &level {
            for d in g.degenerations() {
                next.entry(d.canon_key()).or_insert(d);
            }
        }
        let mut v: Vec<StableGraph> = next.into_values().collect();
        v.sort_unstable();
        level = v;
    }
    level
}

/// Helper for building graphs from tail sets.
pub fn tails_at(assignments: &[(usize, &[usize])]) -> [usize; NUM_TAILS] {
    let mut tails = [usize::MAX; NUM_TAILS];
    for &(v, labels) in assignments {
        for &l in labels {
            assert!((1..=4).contains(&l), "tail labels are 1..=4");
            tails[l - 1] = v;
        }
    }
    assert!(tails.iter().all(|&t| t != usize::MAX), "all four tails must be placed");
    tails
}

/// The set complement of `s` inside `{1,2,3,4}`.
pub fn complement(s: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    (1..=4).filter(|l| !set.contains(l)).collect()
}
