//! The labeled graph of a set of monomials for `d = 4` and checkers for the
//! structural constraints a Kummer basis imposes on it.
//!
//! Edges carry the commutation phase: `v → w` when `vw = i·wv` (phase 1),
//! dashed when `vw = −wv` (phase 2), and a commute edge for phase 0. All
//! checkers work on the phase matrix alone, so synthetic (possibly
//! unrealizable) configurations can be fed to them directly.

use std::fmt::Write as _;

use crate::error::{KummerError, Result};
use crate::kummer::Check;
use crate::monomial::{phase_unchecked, AlgebraShape, ExponentVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    ArrowTo,
    ArrowFrom,
    Dashed,
    Commute,
}

impl EdgeLabel {
    fn from_phase(t: u8) -> Self {
        match t {
            1 => EdgeLabel::ArrowTo,
            3 => EdgeLabel::ArrowFrom,
            2 => EdgeLabel::Dashed,
            _ => EdgeLabel::Commute,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerGraph {
    vertices: Vec<ExponentVector>,
    size: usize,
    phases: Vec<u8>,
}

/// Labeled graph of `basis` for `d = 4`. The basis need not be Kummer.
pub fn build_graph(shape: AlgebraShape, basis: &[ExponentVector]) -> Result<KummerGraph> {
    if shape.degree() != 4 {
        return Err(KummerError::UnsupportedDegree(shape.degree()));
    }
    for (i, v) in basis.iter().enumerate() {
        shape.check(v)?;
        if v.is_zero() {
            return Err(KummerError::InvalidInput(format!("scalar monomial {v}")));
        }
        if basis[..i].contains(v) {
            return Err(KummerError::InvalidInput(format!("duplicate monomial {v}")));
        }
    }
    let size = basis.len();
    let mut phases = vec![0u8; size * size];
    for i in 0..size {
        for j in 0..size {
            phases[i * size + j] = phase_unchecked(4, basis[i].entries(), basis[j].entries()) as u8;
        }
    }
    Ok(KummerGraph {
        vertices: basis.to_vec(),
        size,
        phases,
    })
}

impl KummerGraph {
    /// Graph from a raw phase matrix (entries mod 4, antisymmetric, zero
    /// diagonal). Realizability by actual monomials is not checked.
    pub fn from_phase_matrix(matrix: &[Vec<u8>]) -> Result<Self> {
        let size = matrix.len();
        let mut phases = vec![0u8; size * size];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != size {
                return Err(KummerError::InvalidInput(
                    "phase matrix must be square".into(),
                ));
            }
            for (j, &t) in row.iter().enumerate() {
                if t >= 4 || !(matrix[j][i] + t).is_multiple_of(4) || (i == j && t != 0) {
                    return Err(KummerError::InvalidInput(format!(
                        "phase matrix not antisymmetric mod 4 at ({i},{j})"
                    )));
                }
                phases[i * size + j] = t;
            }
        }
        Ok(KummerGraph {
            vertices: Vec::new(),
            size,
            phases,
        })
    }

    /// Builds a phase matrix from arrow/dashed edges; unlisted pairs commute.
    pub fn from_edges(size: usize, arrows: &[(usize, usize)], dashed: &[(usize, usize)]) -> Self {
        let mut phases = vec![0u8; size * size];
        for &(a, b) in arrows {
            phases[a * size + b] = 1;
            phases[b * size + a] = 3;
        }
        for &(a, b) in dashed {
            phases[a * size + b] = 2;
            phases[b * size + a] = 2;
        }
        KummerGraph {
            vertices: Vec::new(),
            size,
            phases,
        }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Monomials behind the vertices; empty for synthetic graphs.
    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    pub fn phase(&self, i: usize, j: usize) -> u8 {
        self.phases[i * self.size + j]
    }

    pub fn label(&self, i: usize, j: usize) -> EdgeLabel {
        EdgeLabel::from_phase(self.phase(i, j))
    }

    fn arrow(&self, i: usize, j: usize) -> bool {
        self.phase(i, j) == 1
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |i| (i + 1..self.size).map(move |j| (i, j)))
    }

    fn quads(&self) -> Vec<[usize; 4]> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    /// Finds an assignment of the 4-subset to pattern positions that
    /// reproduces `pattern` exactly.
    fn match_pattern(&self, subset: [usize; 4], pattern: &[[u8; 4]; 4]) -> Option<[usize; 4]> {
        PERMUTATIONS_4.iter().find_map(|perm| {
            let placed = [
                subset[perm[0]],
                subset[perm[1]],
                subset[perm[2]],
                subset[perm[3]],
            ];
            let ok = (0..4)
                .all(|p| (p + 1..4).all(|q| self.phase(placed[p], placed[q]) == pattern[p][q]));
            ok.then_some(placed)
        })
    }
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

/// Phase matrix from `(from, to, phase)` triples on four positions.
const fn pattern(edges: [(usize, usize, u8); 6]) -> [[u8; 4]; 4] {
    let mut m = [[0u8; 4]; 4];
    let mut k = 0;
    while k < 6 {
        let (a, b, t) = edges[k];
        m[a][b] = t;
        m[b][a] = (4 - t) % 4;
        k += 1;
    }
    m
}

// positions: v=0, w=1, z=2, t=3
/// `v→w, z→v, w→t, z→t`, with `v -- t` and `w -- z`.
pub const FORBIDDEN_QUAD_A: [[u8; 4]; 4] = pattern([
    (0, 1, 1),
    (2, 0, 1),
    (1, 3, 1),
    (2, 3, 1),
    (0, 3, 2),
    (1, 2, 2),
]);
/// `v→w, v→z, w→z, w→t, z→t`, with `v -- t`.
pub const FORBIDDEN_QUAD_B: [[u8; 4]; 4] = pattern([
    (0, 1, 1),
    (0, 2, 1),
    (1, 2, 1),
    (1, 3, 1),
    (2, 3, 1),
    (0, 3, 2),
]);
/// Directed 4-cycle `v_1 → v_2 → v_4 → v_3 → v_1` with both diagonals dashed.
pub const CYCLE_ALL_ARROWS: [[u8; 4]; 4] = pattern([
    (0, 1, 1),
    (2, 0, 1),
    (0, 3, 2),
    (1, 3, 1),
    (1, 2, 2),
    (3, 2, 1),
]);
/// `v_1` source, `v_4` sink, `v_1 -- v_4` and `v_2 -- v_3`.
pub const BLOCK_TWO: [[u8; 4]; 4] = pattern([
    (0, 1, 1),
    (0, 2, 1),
    (0, 3, 2),
    (1, 3, 1),
    (1, 2, 2),
    (2, 3, 1),
]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadConfig {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenQuad {
    pub config: QuadConfig,
    /// Vertices in pattern order `(v, w, z, t)`.
    pub vertices: [usize; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationConfig {
    CycleAllArrows,
    BlockTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationWitness {
    pub config: OrientationConfig,
    /// Vertices in pattern order `(v_1, v_2, v_3, v_4)`.
    pub subset: [usize; 4],
    pub external: usize,
}

pub fn check_no_commuting(g: &KummerGraph) -> Check<(usize, usize)> {
    match g.pairs().find(|&(i, j)| g.phase(i, j) == 0) {
        Some(p) => Err(p),
        None => Ok(()),
    }
}

/// Dashed edges must form a partial matching. Witness: `(center, a, b)`.
pub fn check_anticommute_matching(g: &KummerGraph) -> Check<(usize, usize, usize)> {
    for v in 0..g.len() {
        let mut partners = (0..g.len()).filter(|&w| w != v && g.phase(v, w) == 2);
        if let (Some(a), Some(b)) = (partners.next(), partners.next()) {
            return Err((v, a, b));
        }
    }
    Ok(())
}

/// Witness `(v, w, z)` with `v → w → z → v`.
pub fn check_no_directed_triangle(g: &KummerGraph) -> Check<[usize; 3]> {
    let n = g.len();
    for v in 0..n {
        for w in v + 1..n {
            for z in v + 1..n {
                if z != w && g.arrow(v, w) && g.arrow(w, z) && g.arrow(z, v) {
                    return Err([v, w, z]);
                }
            }
        }
    }
    Ok(())
}

/// Every simple directed cycle of arrows, each listed from its smallest vertex.
pub fn simple_arrow_cycles(g: &KummerGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    each_simple_cycle(g, |c| {
        out.push(c.to_vec());
        false
    });
    out
}

/// Runs `f` on each simple arrow cycle until it returns true.
fn each_simple_cycle(g: &KummerGraph, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn dfs(
        g: &KummerGraph,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let last = *path.last().unwrap();
        for next in start..g.len() {
            if !g.arrow(last, next) {
                continue;
            }
            if next == start {
                if path.len() >= 2 && f(path) {
                    return true;
                }
            } else if !on_path[next] {
                on_path[next] = true;
                path.push(next);
                if dfs(g, start, path, on_path, f) {
                    return true;
                }
                path.pop();
                on_path[next] = false;
            }
        }
        false
    }
    let mut on_path = vec![false; g.len()];
    for start in 0..g.len() {
        let mut path = vec![start];
        on_path[start] = true;
        if dfs(g, start, &mut path, &mut on_path, &mut f) {
            return true;
        }
        on_path[start] = false;
    }
    false
}

/// Every directed cycle must have length 4 with both diagonals dashed.
/// Witness: the first offending cycle.
pub fn directed_cycles_ok(g: &KummerGraph) -> Check<Vec<usize>> {
    let mut bad = None;
    each_simple_cycle(g, |c| {
        let ok = c.len() == 4 && g.phase(c[0], c[2]) == 2 && g.phase(c[1], c[3]) == 2;
        if !ok {
            bad = Some(c.to_vec());
        }
        !ok
    });
    match bad {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

/// No 4-subset may realize either forbidden quadruple configuration.
pub fn check_forbidden_quads(g: &KummerGraph) -> Check<ForbiddenQuad> {
    for q in g.quads() {
        if let Some(vertices) = g.match_pattern(q, &FORBIDDEN_QUAD_A) {
            return Err(ForbiddenQuad {
                config: QuadConfig::A,
                vertices,
            });
        }
        if let Some(vertices) = g.match_pattern(q, &FORBIDDEN_QUAD_B) {
            return Err(ForbiddenQuad {
                config: QuadConfig::B,
                vertices,
            });
        }
    }
    Ok(())
}

/// For each 4-subset shaped like a dashed-diagonal 4-cycle or like the
/// source/sink block, every other vertex must point into all four or
/// receive arrows from all four.
pub fn check_universal_orientation(g: &KummerGraph) -> Check<OrientationWitness> {
    let configs = [
        (OrientationConfig::CycleAllArrows, &CYCLE_ALL_ARROWS),
        (OrientationConfig::BlockTwo, &BLOCK_TWO),
    ];
    for q in g.quads() {
        for (config, pat) in configs {
            let Some(subset) = g.match_pattern(q, pat) else {
                continue;
            };
            for w in (0..g.len()).filter(|w| !q.contains(w)) {
                let all_out = subset.iter().all(|&v| g.arrow(w, v));
                let all_in = subset.iter().all(|&v| g.arrow(v, w));
                if !all_out && !all_in {
                    return Err(OrientationWitness {
                        config,
                        subset,
                        external: w,
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockType {
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    Forbidden,
}

// positions: v_k=0, v_k'=1, v_{k+1}=2, v_{k+1}'=3
const BLOCK_TYPES: [(BlockType, [[u8; 4]; 4]); 4] = [
    (
        BlockType::TypeI,
        pattern([
            (0, 1, 2),
            (2, 3, 2),
            (0, 2, 1),
            (0, 3, 1),
            (1, 2, 1),
            (1, 3, 1),
        ]),
    ),
    (
        BlockType::TypeII,
        pattern([
            (0, 1, 2),
            (2, 3, 2),
            (0, 2, 1),
            (0, 3, 1),
            (2, 1, 1),
            (3, 1, 1),
        ]),
    ),
    (
        BlockType::TypeIII,
        pattern([
            (0, 1, 2),
            (2, 3, 2),
            (0, 2, 1),
            (3, 0, 1),
            (1, 2, 1),
            (3, 1, 1),
        ]),
    ),
    (
        BlockType::TypeIV,
        pattern([
            (0, 1, 2),
            (2, 3, 2),
            (0, 2, 1),
            (3, 0, 1),
            (2, 1, 1),
            (1, 3, 1),
        ]),
    ),
];

/// Classifies the ordered block `(v_k, v_k', v_{k+1}, v_{k+1}')` whose dashed
/// pairs are `(v_k, v_k')`, `(v_{k+1}, v_{k+1}')` and with `v_k → v_{k+1}`.
pub fn classify_block(phases: &[[u8; 4]; 4]) -> Result<BlockType> {
    for i in 0..4 {
        for j in 0..4 {
            if !(phases[i][j] + phases[j][i]).is_multiple_of(4) || (i == j && phases[i][j] != 0) {
                return Err(KummerError::InvalidBlock(format!(
                    "phase matrix not antisymmetric at ({i},{j})"
                )));
            }
        }
    }
    if phases[0][1] != 2 || phases[2][3] != 2 {
        return Err(KummerError::InvalidBlock(
            "block pairs must anti-commute".into(),
        ));
    }
    if phases[0][2] != 1 {
        return Err(KummerError::InvalidBlock(
            "chain edge v_k → v_{k+1} missing".into(),
        ));
    }
    for (i, j) in [(0, 3), (1, 2), (1, 3)] {
        if phases[i][j].is_multiple_of(2) {
            return Err(KummerError::InvalidBlock(format!(
                "cross edge ({i},{j}) must be an arrow, found phase {}",
                phases[i][j]
            )));
        }
    }
    let g = KummerGraph::from_phase_matrix(&phases.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?;
    if check_forbidden_quads(&g).is_err() {
        return Ok(BlockType::Forbidden);
    }
    BLOCK_TYPES
        .iter()
        .find(|(_, pat)| pat == phases)
        .map(|(t, _)| *t)
        .ok_or_else(|| KummerError::InvalidBlock("unclassified block configuration".into()))
}

/// The eight block configurations allowed a priori, indexed by the
/// orientation bits of `(v_k, v_{k+1}')`, `(v_k', v_{k+1})`, `(v_k', v_{k+1}')`.
pub fn a_priori_blocks() -> Vec<[[u8; 4]; 4]> {
    (0..8u8)
        .map(|bits| {
            let dir = |b: u8| if bits >> b & 1 == 1 { 1 } else { 3 };
            pattern([
                (0, 1, 2),
                (2, 3, 2),
                (0, 2, 1),
                (0, 3, dir(0)),
                (1, 2, dir(1)),
                (1, 3, dir(2)),
            ])
        })
        .collect()
}

impl KummerGraph {
    pub fn classify_block_at(&self, quad: [usize; 4]) -> Result<BlockType> {
        let mut m = [[0u8; 4]; 4];
        for p in 0..4 {
            for q in 0..4 {
                m[p][q] = self.phase(quad[p], quad[q]);
            }
        }
        classify_block(&m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowOrder {
    /// Every arrow points forward in this order.
    Order(Vec<usize>),
    /// A directed cycle preventing any such order.
    Cycle(Vec<usize>),
}

/// Orders a set of vertices that are pairwise joined by arrows so that all
/// arrows point forward.
pub fn topological_arrow_order(g: &KummerGraph, subset: &[usize]) -> Result<ArrowOrder> {
    for (a, &i) in subset.iter().enumerate() {
        if i >= g.len() {
            return Err(KummerError::InvalidInput(format!(
                "vertex {i} out of range"
            )));
        }
        for &j in &subset[a + 1..] {
            if i == j || g.phase(i, j).is_multiple_of(2) {
                return Err(KummerError::InvalidInput(format!(
                    "vertices {i} and {j} are not joined by an arrow"
                )));
            }
        }
    }
    let mut left: Vec<usize> = subset.to_vec();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let source = left
            .iter()
            .position(|&v| left.iter().all(|&u| u == v || !g.arrow(u, v)));
        match source {
            Some(p) => order.push(left.remove(p)),
            None => return Ok(ArrowOrder::Cycle(find_cycle_within(g, &left))),
        }
    }
    Ok(ArrowOrder::Order(order))
}

/// Every vertex in `left` has an in-arrow from `left`; walking backwards
/// along in-arrows must revisit a vertex.
fn find_cycle_within(g: &KummerGraph, left: &[usize]) -> Vec<usize> {
    let mut walk = vec![left[0]];
    loop {
        let cur = *walk.last().unwrap();
        let pred = *left
            .iter()
            .find(|&&u| g.arrow(u, cur))
            .expect("every vertex has a predecessor");
        if let Some(pos) = walk.iter().position(|&v| v == pred) {
            let mut cycle: Vec<usize> = walk[pos..].to_vec();
            cycle.reverse();
            return cycle;
        }
        walk.push(pred);
    }
}

pub fn vertex_name(g: &KummerGraph, i: usize) -> String {
    match g.vertices.get(i) {
        Some(v) => {
            let mut s = String::from("m");
            for e in v.entries() {
                let _ = write!(s, "_{e}");
            }
            s
        }
        None => format!("v{i}"),
    }
}

/// DOT rendering: arrows solid, dashed edges undirected and dashed, commute
/// edges dotted and flagged.
pub fn to_dot(g: &KummerGraph) -> String {
    let mut out = String::from("digraph kummer {\n");
    for i in 0..g.len() {
        let _ = writeln!(out, "  {};", vertex_name(g, i));
    }
    for (i, j) in g.pairs() {
        let (a, b) = (vertex_name(g, i), vertex_name(g, j));
        let _ = match g.label(i, j) {
            EdgeLabel::ArrowTo => writeln!(out, "  {a} -> {b};"),
            EdgeLabel::ArrowFrom => writeln!(out, "  {b} -> {a};"),
            EdgeLabel::Dashed => writeln!(out, "  {a} -> {b} [style=dashed, dir=none];"),
            EdgeLabel::Commute => writeln!(
                out,
                "  {a} -> {b} [style=dotted, dir=none, color=red, warning=\"commuting pair\"];"
            ),
        };
    }
    out.push_str("}\n");
    out
}

/// Results of every structural checker on one graph.
#[derive(Debug, Clone, Default)]
pub struct LemmaReport {
    pub commuting: Option<(usize, usize)>,
    pub anticommute_matching: Option<(usize, usize, usize)>,
    pub directed_triangle: Option<[usize; 3]>,
    pub cycles: Option<Vec<usize>>,
    pub forbidden_quads: Option<ForbiddenQuad>,
    pub universal_orientation: Option<OrientationWitness>,
}

impl LemmaReport {
    pub fn run(g: &KummerGraph) -> Self {
        LemmaReport {
            commuting: check_no_commuting(g).err(),
            anticommute_matching: check_anticommute_matching(g).err(),
            directed_triangle: check_no_directed_triangle(g).err(),
            cycles: directed_cycles_ok(g).err(),
            forbidden_quads: check_forbidden_quads(g).err(),
            universal_orientation: check_universal_orientation(g).err(),
        }
    }

    /// `(check name, passed)` for each checker.
    pub fn outcomes(&self) -> [(&'static str, bool); 6] {
        [
            ("commuting pairs", self.commuting.is_none()),
            ("anti-commute matching", self.anticommute_matching.is_none()),
            ("directed triangles", self.directed_triangle.is_none()),
            ("cycle lengths/diagonals", self.cycles.is_none()),
            ("forbidden quads", self.forbidden_quads.is_none()),
            (
                "universal orientation",
                self.universal_orientation.is_none(),
            ),
        ]
    }

    pub fn all_ok(&self) -> bool {
        self.outcomes().iter().all(|(_, ok)| *ok)
    }
}
