//! Maximal monomial Kummer sets: a pruned branch-and-bound search, an
//! unpruned brute-force oracle, and exhaustive enumeration of maximal sets.
//!
//! The branch-and-bound search works on universe indices (packed exponent
//! vectors). A node holds the chosen set `S` and the candidates `C` such that
//! `S ∪ {c}` is Kummer for every `c ∈ C`; adding `z` only needs the multisets
//! containing both `z` and a candidate. The bound is a greedy colouring of
//! the pair-compatibility graph on `C`. With symmetry enabled, the first
//! element is restricted to one representative per symplectic orbit, and
//! later orbits exclude members of earlier ones.

mod bits;
mod symmetry;
mod universe;

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::construct::standard_basis;
use crate::error::{KummerError, Result};
use crate::kummer::is_kummer_set;
use crate::monomial::{AlgebraShape, ExponentVector};

use bits::Bits;
pub use symmetry::{symmetry_representatives, symplectic_orbits, MAX_ORBIT_UNIVERSE};
use universe::Universe;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub use_symmetry: bool,
    /// Single-threaded, with reproducible witness and node count.
    pub deterministic: bool,
    pub time_budget: Option<Duration>,
    /// Stop as soon as a set of this size is known.
    pub target: Option<usize>,
    /// Worker cap for the parallel mode; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Start from the standard basis as incumbent. Turning this off makes
    /// the search rediscover a largest set on its own.
    pub seed_incumbent: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            use_symmetry: true,
            deterministic: false,
            time_budget: None,
            target: None,
            threads: None,
            seed_incumbent: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The whole tree was explored; `max_size` is exact.
    Exhausted,
    /// The time budget ran out.
    Budget,
    /// A set of the requested target size was found.
    Target,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub max_size: usize,
    pub witness: Vec<ExponentVector>,
    pub explored_nodes: u64,
    pub elapsed: Duration,
    /// True iff `max_size` is proven maximal.
    pub complete: bool,
    pub termination: Termination,
}

fn certify(shape: AlgebraShape, witness: &[ExponentVector]) -> Result<()> {
    if witness.is_empty() {
        return Ok(());
    }
    match is_kummer_set(shape, witness)? {
        Ok(()) => Ok(()),
        Err(v) => Err(KummerError::Certificate(format!(
            "search witness is not Kummer: multiplicities {:?} on {} elements",
            v.multiplicities,
            v.subset.len()
        ))),
    }
}

struct Shared<'a> {
    universe: &'a Universe,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    budget_hit: AtomicBool,
    target_hit: AtomicBool,
    deadline: Option<Instant>,
    target: Option<usize>,
}

impl Shared<'_> {
    fn best(&self) -> usize {
        self.best.load(Ordering::Relaxed)
    }

    fn offer(&self, chosen: &[usize]) {
        if chosen.len() <= self.best() {
            return;
        }
        let mut w = self.witness.lock().unwrap();
        if chosen.len() > self.best() {
            *w = chosen.to_vec();
            self.best.store(chosen.len(), Ordering::Relaxed);
            if self.target.is_some_and(|t| chosen.len() >= t) {
                self.target_hit.store(true, Ordering::Relaxed);
                self.stop.store(true, Ordering::Relaxed);
            }
        }
    }
}

struct Worker<'s, 'a> {
    shared: &'s Shared<'a>,
    nodes: u64,
}

impl Drop for Worker<'_, '_> {
    fn drop(&mut self) {
        self.shared.nodes.fetch_add(self.nodes, Ordering::Relaxed);
    }
}

impl Worker<'_, '_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(512) {
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.budget_hit.store(true, Ordering::Relaxed);
                    self.shared.stop.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.shared.stop.load(Ordering::Relaxed)
    }

    fn expand(&mut self, chosen: &mut Vec<usize>, mut cand: Bits) {
        if !self.tick() {
            return;
        }
        self.shared.offer(chosen);
        if cand.is_empty() || chosen.len() + cand.count() <= self.shared.best() {
            return;
        }
        let u = self.shared.universe;
        let (order, colors) = colour_classes(u, &cand);
        for idx in (0..order.len()).rev() {
            if chosen.len() + colors[idx] <= self.shared.best() {
                return;
            }
            let v = order[idx];
            let next = u.filter_extension(chosen, v, &cand);
            chosen.push(v);
            self.expand(chosen, next);
            chosen.pop();
            cand.remove(v);
            if self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// Greedy colouring of the pair-compatibility graph on `cand`: each colour
/// class is pairwise incompatible, so at most one member per class can be
/// chosen. Returns vertices in colouring order with their colour numbers.
fn colour_classes(u: &Universe, cand: &Bits) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = cand.clone();
    let mut order = Vec::new();
    let mut colours = Vec::new();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            order.push(v);
            colours.push(colour);
            uncoloured.remove(v);
            q.remove(v);
            q.and_not_assign(&u.pair[v]);
        }
    }
    (order, colours)
}

/// First-level groups: `(representative, members to exclude afterwards)`.
fn first_level_groups(
    shape: AlgebraShape,
    u: &Universe,
    use_symmetry: bool,
) -> Vec<(usize, Vec<usize>)> {
    if use_symmetry {
        match symplectic_orbits(shape) {
            Ok(orbits) => {
                return orbits
                    .iter()
                    .map(|o| (u.index_of(&o[0]), o.iter().map(|v| u.index_of(v)).collect()))
                    .collect()
            }
            Err(e) => log::warn!("{e}; continuing without symmetry reduction"),
        }
    }
    (1..u.size).map(|i| (i, vec![i])).collect()
}

/// Largest monomial Kummer set for `shape`, seeded with the standard basis.
pub fn max_kummer_dimension(shape: AlgebraShape, config: &SearchConfig) -> Result<SearchResult> {
    let started = Instant::now();
    let universe = Universe::new(shape)?;
    let seed: Vec<usize> = if config.seed_incumbent {
        standard_basis(shape)
            .iter()
            .map(|v| universe.index_of(v))
            .collect()
    } else {
        Vec::new()
    };
    let shared = Shared {
        universe: &universe,
        best: AtomicUsize::new(seed.len()),
        witness: Mutex::new(seed.clone()),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
        target_hit: AtomicBool::new(false),
        deadline: config.time_budget.map(|b| started + b),
        target: config.target,
    };
    if config.target.is_some_and(|t| seed.len() >= t) {
        shared.target_hit.store(true, Ordering::Relaxed);
        shared.stop.store(true, Ordering::Relaxed);
    }

    let run = || {
        let mut excluded = Bits::empty(universe.size);
        let groups = first_level_groups(shape, &universe, config.use_symmetry);
        log::info!(
            "{shape}: {} candidates, {} root groups, incumbent {}",
            universe.size - 1,
            groups.len(),
            seed.len()
        );
        for (rep, orbit) in groups {
            if shared.stop.load(Ordering::Relaxed) {
                break;
            }
            log::info!(
                "root {}: best {} after {} nodes",
                universe.vector(rep),
                shared.best(),
                shared.nodes.load(Ordering::Relaxed)
            );
            let mut cand = universe.pair[rep].clone();
            cand.and_not_assign(&excluded);
            if config.deterministic {
                Worker {
                    shared: &shared,
                    nodes: 0,
                }
                .expand(&mut vec![rep], cand);
            } else {
                search_root_parallel(&shared, rep, cand);
            }
            for i in orbit {
                excluded.insert(i);
            }
        }
    };
    match (config.deterministic, config.threads) {
        (false, Some(t)) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| KummerError::InvalidInput(format!("thread pool: {e}")))?
            .install(run),
        _ => run(),
    }

    let termination = if shared.budget_hit.load(Ordering::Relaxed) {
        Termination::Budget
    } else if shared.target_hit.load(Ordering::Relaxed) {
        Termination::Target
    } else {
        Termination::Exhausted
    };
    let witness: Vec<ExponentVector> = shared
        .witness
        .lock()
        .unwrap()
        .iter()
        .map(|&i| universe.vector(i))
        .collect();
    certify(shape, &witness)?;
    Ok(SearchResult {
        max_size: witness.len(),
        witness,
        explored_nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: started.elapsed(),
        complete: termination == Termination::Exhausted,
        termination,
    })
}

/// Root node with its children explored in parallel.
fn search_root_parallel(shared: &Shared<'_>, rep: usize, mut cand: Bits) {
    let u = shared.universe;
    {
        let mut w = Worker { shared, nodes: 0 };
        if !w.tick() || cand.is_empty() || cand.count() < shared.best() {
            return;
        }
    }
    let (order, colours) = colour_classes(u, &cand);
    let mut tasks = Vec::with_capacity(order.len());
    for idx in (0..order.len()).rev() {
        let v = order[idx];
        tasks.push((colours[idx], v, u.filter_extension(&[rep], v, &cand)));
        cand.remove(v);
    }
    tasks.into_par_iter().for_each(|(bound, v, next)| {
        if shared.stop.load(Ordering::Relaxed) || bound < shared.best() {
            return;
        }
        Worker { shared, nodes: 0 }.expand(&mut vec![rep, v], next);
    });
}

const ORACLE_MAX_CANDIDATES: u64 = 255;

fn small_universe(shape: AlgebraShape) -> Result<Vec<ExponentVector>> {
    match shape.universe_size() {
        Some(s) if s - 1 <= ORACLE_MAX_CANDIDATES => shape.nonzero_vectors(),
        _ => Err(KummerError::Capacity(format!(
            "{shape} has more than {ORACLE_MAX_CANDIDATES} nonzero monomials"
        ))),
    }
}

/// Depth-first enumeration of every Kummer set, extending only sets that
/// remain Kummer (full predicate at every step). Calls `visit` on each set;
/// `visit` returns false to skip the subtree.
fn each_kummer_set(
    shape: AlgebraShape,
    all: &[ExponentVector],
    visit: &mut dyn FnMut(&[ExponentVector]) -> Result<()>,
) -> Result<()> {
    fn rec(
        shape: AlgebraShape,
        all: &[ExponentVector],
        start: usize,
        current: &mut Vec<ExponentVector>,
        visit: &mut dyn FnMut(&[ExponentVector]) -> Result<()>,
    ) -> Result<()> {
        visit(current)?;
        for i in start..all.len() {
            current.push(all[i].clone());
            if is_kummer_set(shape, current)?.is_ok() {
                rec(shape, all, i + 1, current, visit)?;
            }
            current.pop();
        }
        Ok(())
    }
    rec(shape, all, 0, &mut Vec::new(), visit)
}

/// Exact maximum by unpruned enumeration (no symmetry, no bounds). Only for
/// shapes with at most 255 nonzero monomials.
pub fn brute_force_oracle(shape: AlgebraShape) -> Result<SearchResult> {
    let started = Instant::now();
    let all = small_universe(shape)?;
    let mut best: Vec<ExponentVector> = Vec::new();
    let mut nodes = 0u64;
    each_kummer_set(shape, &all, &mut |s| {
        nodes += 1;
        if s.len() > best.len() {
            best = s.to_vec();
        }
        Ok(())
    })?;
    certify(shape, &best)?;
    Ok(SearchResult {
        max_size: best.len(),
        witness: best,
        explored_nodes: nodes,
        elapsed: started.elapsed(),
        complete: true,
        termination: Termination::Exhausted,
    })
}

fn require_single_factor(shape: AlgebraShape) -> Result<Vec<ExponentVector>> {
    if shape.factors() != 1 {
        return Err(KummerError::Capacity(format!(
            "exhaustive enumeration is limited to n=1, got {shape}"
        )));
    }
    small_universe(shape)
}

/// Every nonempty Kummer set, for `n = 1`.
pub fn enumerate_kummer_sets(shape: AlgebraShape) -> Result<Vec<Vec<ExponentVector>>> {
    let all = require_single_factor(shape)?;
    let mut out = Vec::new();
    each_kummer_set(shape, &all, &mut |s| {
        if !s.is_empty() {
            out.push(s.to_vec());
        }
        Ok(())
    })?;
    Ok(out)
}

/// Every inclusion-maximal Kummer set, for `n = 1`. Each set is produced
/// once, in packed-index order, and certified by the full predicate.
pub fn enumerate_maximal_sets(shape: AlgebraShape) -> Result<Vec<Vec<ExponentVector>>> {
    let all = require_single_factor(shape)?;
    let mut out = Vec::new();
    each_kummer_set(shape, &all, &mut |s| {
        if s.is_empty() {
            return Ok(());
        }
        for v in all.iter().filter(|v| !s.contains(v)) {
            let mut bigger = s.to_vec();
            bigger.push(v.clone());
            if is_kummer_set(shape, &bigger)?.is_ok() {
                return Ok(());
            }
        }
        certify(shape, s)?;
        out.push(s.to_vec());
        Ok(())
    })?;
    Ok(out)
}
