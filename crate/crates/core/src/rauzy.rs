//! Rauzy graphs of a word, their union over all orders, the circuits built
//! from conjugacy powers and their cycle-vectors.
//!
//! In the Rauzy graph of order `ℓ` the vertices are the length-`ℓ` factors
//! and every length-`ℓ+1` factor `u` is an arc from `u[..ℓ]` to `u[1..]`.
//! Order 0 has the single vertex ε carrying one loop per letter. A factor
//! appears in the union both as a vertex (order `|u|`) and as an arc (order
//! `|u|-1`); the two are distinct objects.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{shortlex, Word};
use crate::words::{conj_powers_are_factors, factor_set, lyndon_factors, FactorIndex, LyndonRoot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RauzyGraph {
    order: usize,
    vertices: Vec<Word>,
    arcs: Vec<Word>,
}

pub fn build_rauzy(w: &[u8], order: usize) -> Result<RauzyGraph> {
    if order > w.len() {
        return Err(Error::OutOfRange {
            what: "order",
            value: order,
            max: w.len(),
        });
    }
    let vertices = factor_set(w, order)?.into_iter().collect();
    let arcs = if order < w.len() {
        factor_set(w, order + 1)?.into_iter().collect()
    } else {
        Vec::new()
    };
    Ok(RauzyGraph {
        order,
        vertices,
        arcs,
    })
}

impl RauzyGraph {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[Word] {
        &self.arcs
    }

    pub fn initial(arc: &[u8]) -> &[u8] {
        &arc[..arc.len() - 1]
    }

    pub fn terminal(arc: &[u8]) -> &[u8] {
        &arc[1..]
    }

    pub fn component_count(&self) -> usize {
        let index: HashMap<&[u8], usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.letters(), i))
            .collect();
        let mut dsu = DisjointSets::new(self.vertices.len());
        for a in &self.arcs {
            dsu.union(index[Self::initial(a)], index[Self::terminal(a)]);
        }
        dsu.count()
    }

    /// `n_a - n_v + n_c`.
    pub fn cyclomatic_number(&self) -> usize {
        self.arcs.len() + self.component_count() - self.vertices.len()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }

    fn count(&self) -> usize {
        self.sets
    }
}

/// Total order on the arcs of the union graph: length, then lexicographic.
#[derive(Debug, Clone, Default)]
pub struct ArcIndex {
    arcs: Vec<Word>,
    position: HashMap<Vec<u8>, usize>,
}

impl ArcIndex {
    pub fn new(mut arcs: Vec<Word>) -> Self {
        arcs.sort_by(|a, b| shortlex(a, b));
        arcs.dedup();
        let position = arcs
            .iter()
            .enumerate()
            .map(|(i, a)| (a.letters().to_vec(), i))
            .collect();
        ArcIndex { arcs, position }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn position(&self, arc: &[u8]) -> Option<usize> {
        self.position.get(arc).copied()
    }

    pub fn arc(&self, i: usize) -> &Word {
        &self.arcs[i]
    }
}

/// All Rauzy graphs of orders `0..=|w|`.
#[derive(Debug, Clone)]
pub struct RauzyUnion {
    word: Word,
    graphs: Vec<RauzyGraph>,
    arc_index: ArcIndex,
    n_components: usize,
}

pub fn build_union(w: &[u8]) -> RauzyUnion {
    let graphs: Vec<RauzyGraph> = (0..=w.len())
        .map(|l| build_rauzy(w, l).expect("order within range"))
        .collect();
    let arc_index = ArcIndex::new(graphs.iter().flat_map(|g| g.arcs.iter().cloned()).collect());

    // Components by undirected reachability over the whole union.
    let mut ids: HashMap<&[u8], usize> = HashMap::new();
    for g in &graphs {
        for v in &g.vertices {
            let next = ids.len();
            ids.insert(v.letters(), next);
        }
    }
    let mut dsu = DisjointSets::new(ids.len());
    for g in &graphs {
        for a in &g.arcs {
            dsu.union(ids[RauzyGraph::initial(a)], ids[RauzyGraph::terminal(a)]);
        }
    }
    let n_components = dsu.count();

    RauzyUnion {
        word: Word::from(w),
        graphs,
        arc_index,
        n_components,
    }
}

impl RauzyUnion {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn graph(&self, order: usize) -> Option<&RauzyGraph> {
        self.graphs.get(order)
    }

    pub fn graphs(&self) -> &[RauzyGraph] {
        &self.graphs
    }

    pub fn arc_index(&self) -> &ArcIndex {
        &self.arc_index
    }

    pub fn n_vertices(&self) -> usize {
        self.graphs.iter().map(|g| g.vertices.len()).sum()
    }

    pub fn n_arcs(&self) -> usize {
        self.graphs.iter().map(|g| g.arcs.len()).sum()
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn cyclomatic_number(&self) -> usize {
        self.n_arcs() + self.n_components - self.n_vertices()
    }
}

/// The closed walk `(x_1^{m/|z|}, ..., x_{|z|}^{m/|z|})` in the Rauzy graph
/// of order `m - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub root: LyndonRoot,
    pub m: usize,
    pub arcs: Vec<Word>,
}

impl Circuit {
    pub fn order(&self) -> usize {
        self.m - 1
    }

    /// `z^{m/|z|}`.
    pub fn smallest_arc(&self) -> &Word {
        &self.arcs[0]
    }

    /// Consecutive arcs chain head to tail, and the last returns to the first.
    pub fn is_closed(&self) -> bool {
        let n = self.arcs.len();
        (0..n).all(|i| {
            RauzyGraph::terminal(&self.arcs[i]) == RauzyGraph::initial(&self.arcs[(i + 1) % n])
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

fn make_circuit(z: &LyndonRoot, m: usize) -> Circuit {
    Circuit {
        root: z.clone(),
        m,
        arcs: (1..=z.len()).map(|i| z.power_of_rotation(i, m)).collect(),
    }
}

/// The circuit with arc set `[z]_m` in the Rauzy graph of order `m - 1`.
///
/// Any `m >= 1` is accepted, including `m < |z|` where the walk may repeat
/// arcs; such circuits are not members of `CS_w(z)`.
pub fn circuit_for(w: &[u8], z: &LyndonRoot, m: usize) -> Result<Circuit> {
    if m == 0 || m > w.len() {
        return Err(Error::OutOfRange {
            what: "circuit length m",
            value: m,
            max: w.len(),
        });
    }
    let c = make_circuit(z, m);
    let idx = FactorIndex::new(w);
    if let Some(missing) = c.arcs.iter().find(|a| !idx.contains(a)) {
        return Err(Error::NotAFactor(missing.to_string(), Word::from(w).to_string()));
    }
    debug_assert!(c.is_closed());
    Ok(c)
}

/// Largest `m <= |w|` with `[z]_m ⊆ F(w)`; valid `m` are downward closed.
pub fn max_conj_power(z: &LyndonRoot, factors: &FactorIndex<'_>) -> usize {
    let mut m = 0;
    while m < factors.word().len() && conj_powers_are_factors(z, m + 1, factors) {
        m += 1;
    }
    m
}

/// Number of circuits in `CS_w(z)`, i.e. `max(0, M_max - |z| + 1)`.
pub fn cs_count(z: &LyndonRoot, factors: &FactorIndex<'_>) -> usize {
    (max_conj_power(z, factors) + 1).saturating_sub(z.len())
}

/// `CS_w(z)`: one circuit per `m` in `|z|..=M_max`.
pub fn cs_set(w: &[u8], z: &LyndonRoot) -> Result<Vec<Circuit>> {
    let idx = FactorIndex::new(w);
    if !idx.contains(z.word()) {
        return Err(Error::NotAFactor(z.to_string(), Word::from(w).to_string()));
    }
    Ok(cs_set_in(z, &idx))
}

pub fn cs_set_in(z: &LyndonRoot, factors: &FactorIndex<'_>) -> Vec<Circuit> {
    (z.len()..=max_conj_power(z, factors))
        .map(|m| make_circuit(z, m))
        .collect()
}

/// `CS_w(z)` for every Lyndon factor `z`, keyed by root.
pub fn all_cs(w: &[u8]) -> BTreeMap<LyndonRoot, Vec<Circuit>> {
    let idx = FactorIndex::new(w);
    lyndon_factors(w)
        .into_iter()
        .map(|z| {
            let cs = cs_set_in(&z, &idx);
            (z, cs)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Signed traversal counts of a cycle over an [`ArcIndex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleVector {
    dim: usize,
    entries: BTreeMap<usize, i64>,
}

impl CycleVector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries in increasing index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn get(&self, i: usize) -> i64 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<i64> {
        let mut v = vec![0; self.dim];
        for (&i, &x) in &self.entries {
            v[i] = x;
        }
        v
    }
}

/// `c_i = r_i - s_i` for a walk given as arcs with traversal directions.
pub fn cycle_vector_of_walk(walk: &[(Word, Direction)], idx: &ArcIndex) -> Result<CycleVector> {
    let mut entries = BTreeMap::new();
    for (arc, dir) in walk {
        let i = idx
            .position(arc)
            .ok_or_else(|| Error::UnknownArc(arc.to_string()))?;
        let e = entries.entry(i).or_insert(0i64);
        *e += match dir {
            Direction::Forward => 1,
            Direction::Backward => -1,
        };
        if *e == 0 {
            entries.remove(&i);
        }
    }
    Ok(CycleVector {
        dim: idx.len(),
        entries,
    })
}

/// Circuits traverse every arc forward.
pub fn cycle_vector(c: &Circuit, idx: &ArcIndex) -> Result<CycleVector> {
    let walk: Vec<(Word, Direction)> = c
        .arcs
        .iter()
        .map(|a| (a.clone(), Direction::Forward))
        .collect();
    cycle_vector_of_walk(&walk, idx)
}
