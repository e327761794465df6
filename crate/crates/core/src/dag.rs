//! Precedence graphs and searches.
//!
//! Arms are labeled `1..=n`. An edge `(u, v)` means `u` must be examined
//! before `v`. A *search* is an ordered, duplicate-free arm sequence in which
//! every arm's predecessors appear earlier; equivalently, a prefix of a linear
//! extension of the precedence order. Search supports are *initial sets*
//! (predecessor-closed vertex sets).

use std::collections::BTreeSet;
use std::fmt;

use crate::{EXHAUSTIVE_LIMIT, Error, Result};

/// 1-based arm label.
pub type Arm = usize;

/// A finite DAG over arms `1..=n`.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    edges: BTreeSet<(Arm, Arm)>,
    preds: Vec<Vec<Arm>>,
}

impl Dag {
    /// Validate and build a DAG from an edge list over `1..=n`.
    ///
    /// Duplicate edges are collapsed. Fails on labels outside `1..=n`, on
    /// self-loops, and on directed cycles (one offending cycle is reported).
    pub fn new(n: usize, edges: &[(Arm, Arm)]) -> Result<Dag> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(Error::InvalidVertexLabel { label, n });
                }
            }
            if u == v {
                return Err(Error::CycleDetected { cycle: vec![u] });
            }
            set.insert((u, v));
        }
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for &(u, v) in &set {
            preds[v - 1].push(u);
            succs[u - 1].push(v);
        }
        if let Some(cycle) = find_cycle(n, &succs) {
            return Err(Error::CycleDetected { cycle });
        }
        Ok(Dag {
            n,
            edges: set,
            preds,
        })
    }

    /// The DAG with no precedence constraints.
    pub fn edgeless(n: usize) -> Result<Dag> {
        Dag::new(n, &[])
    }

    /// The chain `1 -> 2 -> ... -> n`.
    pub fn chain(n: usize) -> Result<Dag> {
        let edges: Vec<_> = (1..n).map(|u| (u, u + 1)).collect();
        Dag::new(n, &edges)
    }

    /// Number of arms.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> impl Iterator<Item = (Arm, Arm)> + '_ {
        self.edges.iter().copied()
    }

    /// Direct predecessors of an arm, ascending.
    pub fn predecessors(&self, arm: Arm) -> &[Arm] {
        &self.preds[arm - 1]
    }

    fn check_label(&self, label: Arm) -> Result<()> {
        if label == 0 || label > self.n {
            return Err(Error::InvalidVertexLabel { label, n: self.n });
        }
        Ok(())
    }

    /// Is `seq` a search: duplicate-free, with every arm's predecessors
    /// occurring at earlier positions? The empty sequence is a search.
    pub fn is_search(&self, seq: &[Arm]) -> Result<bool> {
        let mut seen = vec![false; self.n];
        for &arm in seq {
            self.check_label(arm)?;
            if seen[arm - 1] {
                return Ok(false);
            }
            if !self.preds[arm - 1].iter().all(|&p| seen[p - 1]) {
                return Ok(false);
            }
            seen[arm - 1] = true;
        }
        Ok(true)
    }

    /// Is `arms` predecessor-closed, i.e. the support of some search?
    pub fn is_initial_set(&self, arms: &[Arm]) -> Result<bool> {
        let mut member = vec![false; self.n];
        for &arm in arms {
            self.check_label(arm)?;
            member[arm - 1] = true;
        }
        for &arm in arms {
            if !self.preds[arm - 1].iter().all(|&p| member[p - 1]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerate every search exactly once, under the default size guard.
    ///
    /// Depth-first over currently available arms in ascending order, so each
    /// search is yielded before its extensions and the whole order is
    /// deterministic. The empty search comes first. For the edgeless graph
    /// the count is `sum_{k=0}^{n} n!/k!`.
    pub fn enumerate_searches(&self) -> Result<SearchIter<'_>> {
        self.enumerate_searches_with_limit(EXHAUSTIVE_LIMIT)
    }

    /// Same as [`Dag::enumerate_searches`] with an explicit guard.
    pub fn enumerate_searches_with_limit(&self, limit: usize) -> Result<SearchIter<'_>> {
        if self.n > limit {
            return Err(Error::InstanceTooLarge { n: self.n, limit });
        }
        Ok(SearchIter {
            dag: self,
            prefix: Vec::with_capacity(self.n),
            used: vec![false; self.n],
            frames: Vec::with_capacity(self.n + 1),
            started: false,
        })
    }

    /// Parse the DAG text format: first significant line is `n`, each further
    /// significant line is an edge `u v` (1-based). Lines starting with `#`
    /// and blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Dag> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            if n.is_none() {
                let parsed = line.parse::<usize>().map_err(|_| Error::DagFileParse {
                    line: lineno,
                    msg: format!("expected arm count, got {line:?}"),
                })?;
                n = Some(parsed);
                continue;
            }
            let mut parts = line.split_whitespace();
            let (u, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(Error::DagFileParse {
                        line: lineno,
                        msg: format!("expected edge \"u v\", got {line:?}"),
                    });
                }
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::DagFileParse {
                    line: lineno,
                    msg: format!("bad arm label {s:?}"),
                })
            };
            edges.push((parse(u)?, parse(v)?));
        }
        let n = n.ok_or(Error::DagFileParse {
            line: 0,
            msg: "missing arm count line".into(),
        })?;
        Dag::new(n, &edges)
    }

    /// Render in the text file format (no comments, edges sorted).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Locate one directed cycle via iterative three-color DFS.
fn find_cycle(n: usize, succs: &[Vec<Arm>]) -> Option<Vec<Arm>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; n];
    let mut parent = vec![0usize; n];
    for start in 1..=n {
        if color[start - 1] != Color::White {
            continue;
        }
        // stack of (node, next successor index)
        let mut stack = vec![(start, 0usize)];
        color[start - 1] = Color::Gray;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succs[node - 1].len() {
                let succ = succs[node - 1][*next];
                *next += 1;
                match color[succ - 1] {
                    Color::White => {
                        color[succ - 1] = Color::Gray;
                        parent[succ - 1] = node;
                        stack.push((succ, 0));
                    }
                    Color::Gray => {
                        // back edge: unwind node -> ... -> succ
                        let mut cycle = vec![succ];
                        let mut cur = node;
                        while cur != succ {
                            cycle.push(cur);
                            cur = parent[cur - 1];
                        }
                        cycle.reverse();
                        // reverse gives succ-last ordering; rotate so the
                        // cycle reads in edge direction starting at succ
                        let len = cycle.len();
                        cycle.rotate_left(len - 1);
                        return Some(cycle);
                    }
                    Color::Black => {}
                }
            } else {
                color[node - 1] = Color::Black;
                stack.pop();
            }
        }
    }
    None
}

/// An ordered, duplicate-free arm sequence.
///
/// Validity with respect to a particular [`Dag`] is the caller's concern;
/// check with [`Dag::is_search`] when provenance is unclear. Searches produced
/// by this crate (enumeration, scheduling, oracle) are valid by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Search(Vec<Arm>);

impl Search {
    pub fn empty() -> Search {
        Search(Vec::new())
    }

    pub fn from_arms(arms: Vec<Arm>) -> Search {
        Search(arms)
    }

    pub fn arms(&self) -> &[Arm] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, arm: Arm) -> bool {
        self.0.contains(&arm)
    }

    /// The prefix of the first `len` arms.
    pub fn prefix(&self, len: usize) -> Search {
        Search(self.0[..len].to_vec())
    }

    /// Unordered support as a sorted vector.
    pub fn support(&self) -> Vec<Arm> {
        let mut s = self.0.clone();
        s.sort_unstable();
        s
    }
}

impl fmt::Display for Search {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, arm) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{arm}")?;
        }
        write!(f, ")")
    }
}

/// Lazy depth-first enumeration of all searches of a DAG.
pub struct SearchIter<'a> {
    dag: &'a Dag,
    prefix: Vec<Arm>,
    used: Vec<bool>,
    frames: Vec<Frame>,
    started: bool,
}

struct Frame {
    candidates: Vec<Arm>,
    next: usize,
}

impl SearchIter<'_> {
    fn available(&self) -> Vec<Arm> {
        (1..=self.dag.n)
            .filter(|&a| {
                !self.used[a - 1] && self.dag.preds[a - 1].iter().all(|&p| self.used[p - 1])
            })
            .collect()
    }
}

impl Iterator for SearchIter<'_> {
    type Item = Search;

    fn next(&mut self) -> Option<Search> {
        if !self.started {
            self.started = true;
            self.frames.push(Frame {
                candidates: self.available(),
                next: 0,
            });
            return Some(Search::empty());
        }
        loop {
            let frame = self.frames.last_mut()?;
            if frame.next < frame.candidates.len() {
                let arm = frame.candidates[frame.next];
                frame.next += 1;
                self.prefix.push(arm);
                self.used[arm - 1] = true;
                self.frames.push(Frame {
                    candidates: self.available(),
                    next: 0,
                });
                return Some(Search::from_arms(self.prefix.clone()));
            }
            self.frames.pop();
            if let Some(arm) = self.prefix.pop() {
                self.used[arm - 1] = false;
            }
        }
    }
}
