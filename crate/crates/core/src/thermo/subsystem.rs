use crate::dyadic::{torus_distance, Potential, RationalEvaluator, TorusPoint};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use std::collections::VecDeque;

/// Deepest dyadic level accepted by [`build_subsystem`].
pub const MAX_LEVEL: u32 = 20;

/// Certified range of `f_c` on one node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// A graph of closed intervals with transitions and per-node potential
/// brackets. Built from level-`N` dyadic intervals, or by hand.
#[derive(Clone, Debug)]
pub struct MarkovSubsystem {
    pub level: u32,
    pub delta: Option<BigRational>,
    /// Dyadic index `k` of each node (`[k/2^N, (k+1)/2^N]`).
    pub nodes: Vec<u64>,
    pub successors: Vec<Vec<usize>>,
    pub brackets: Vec<Bracket>,
    /// Node positions of the chosen strongly connected component, sorted.
    pub recurrent: Vec<usize>,
}

fn nontrivial_components(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(successors.len(), 2 * successors.len());
    let ids: Vec<_> = (0..successors.len()).map(|_| g.add_node(())).collect();
    for (i, succ) in successors.iter().enumerate() {
        for &j in succ {
            g.add_edge(ids[i], ids[j], ());
        }
    }
    kosaraju_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .filter(|c| c.len() > 1 || successors[c[0]].contains(&c[0]))
        .collect()
}

/// Largest nontrivial component; ties go to the one with the smallest node.
fn main_component(successors: &[Vec<usize>]) -> Vec<usize> {
    nontrivial_components(successors)
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .unwrap_or_default()
}

impl MarkovSubsystem {
    /// A subsystem from an explicit graph; the recurrent part is the largest
    /// nontrivial strongly connected component.
    pub fn from_graph(successors: Vec<Vec<usize>>, brackets: Vec<Bracket>) -> Result<Self> {
        let n = successors.len();
        if brackets.len() != n || successors.iter().flatten().any(|&j| j >= n) {
            return Err(Error::PreconditionViolated("malformed subsystem graph".into()));
        }
        let recurrent = main_component(&successors);
        if recurrent.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(MarkovSubsystem {
            level: 0,
            delta: None,
            nodes: (0..n as u64).collect(),
            successors,
            brackets,
            recurrent,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Position of the node whose interval contains `x` (exact), if any.
    /// A dyadic endpoint shared by two nodes resolves to the right-hand one.
    pub fn node_of(&self, x: &TorusPoint) -> Option<usize> {
        let scaled = x.to_ratio() * BigRational::from_integer(BigInt::one() << self.level);
        let k = scaled.floor().to_integer().to_u64()?;
        self.nodes.binary_search(&k).ok()
    }

    /// Whether `from -> to` is a transition.
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].contains(&to)
    }

    /// Successor lists restricted to the recurrent part, reindexed.
    pub(crate) fn recurrent_graph(&self) -> (Vec<Vec<usize>>, Vec<Bracket>) {
        let mut local = vec![usize::MAX; self.nodes.len()];
        for (i, &n) in self.recurrent.iter().enumerate() {
            local[n] = i;
        }
        let succ = self
            .recurrent
            .iter()
            .map(|&n| {
                self.successors[n]
                    .iter()
                    .filter_map(|&j| (local[j] != usize::MAX).then_some(local[j]))
                    .collect()
            })
            .collect();
        let br = self.recurrent.iter().map(|&n| self.brackets[n]).collect();
        (succ, br)
    }
}

fn dyadic(k: u64, level: u32) -> TorusPoint {
    TorusPoint::rational(BigInt::from(k), BigInt::one() << level)
}

/// Level-`N` dyadic Markov subsystem avoiding the open ball `B(b, delta)`.
///
/// `nodes` lists every interval whose closure avoids the ball; transitions are
/// `k -> 2k, 2k+1 (mod 2^N)`. Pressure is computed on the largest strongly
/// connected component. Brackets are the endpoint values of `f_c` in order;
/// on the one node that has `b + 1/2` in its interior `f_c` is unimodal, the
/// upper bracket is its maximum `0` and the lower the smaller endpoint value.
pub fn build_subsystem(p: &Potential, delta: &BigRational, level: u32) -> Result<MarkovSubsystem> {
    if p.c().is_zero() {
        return Err(Error::HypothesisViolated(
            "c = 0 has no irreducible subsystem avoiding b; use the closed form".into(),
        ));
    }
    if level > MAX_LEVEL {
        return Err(Error::SizeLimit {
            what: "level",
            value: level as u64,
            limit: MAX_LEVEL as u64,
        });
    }
    let four = BigRational::from_integer(4.into());
    let cell = BigRational::new(BigInt::one(), BigInt::one() << level);
    if delta <= &BigRational::zero() || cell >= delta / four {
        return Err(Error::PreconditionViolated(format!(
            "need 0 < 2^-N < delta/4 (delta = {delta}, N = {level})"
        )));
    }
    let b = p.b();
    let b_scaled = b.to_ratio() * BigRational::from_integer(BigInt::one() << level);
    let half = BigRational::new(1.into(), 2.into());
    let peak = TorusPoint::from_ratio(b.to_ratio() + half).to_ratio()
        * BigRational::from_integer(BigInt::one() << level);
    let peak_node = (!peak.is_integer()).then(|| peak.floor().to_integer().to_u64()).flatten();

    let size = 1u64 << level;
    let eval = RationalEvaluator::new(p);
    let endpoint = |k: u64| eval.eval(k % size, size).to_f64();

    let mut nodes = Vec::new();
    let mut brackets = Vec::new();
    for k in 0..size {
        let lo = BigRational::from_integer(k.into());
        let hi = BigRational::from_integer((k + 1).into());
        let b_inside = b_scaled >= lo && b_scaled <= hi;
        if b_inside
            || torus_distance(&dyadic(k, level), &b).to_ratio() < *delta
            || torus_distance(&dyadic((k + 1) % size, level), &b).to_ratio() < *delta
        {
            continue;
        }
        let (a, c) = (endpoint(k), endpoint(k + 1));
        let bracket = if peak_node == Some(k) {
            Bracket {
                lower: a.min(c),
                upper: 0.0,
            }
        } else {
            Bracket {
                lower: a.min(c),
                upper: a.max(c),
            }
        };
        nodes.push(k);
        brackets.push(bracket);
    }
    if nodes.is_empty() {
        return Err(Error::EmptySystem);
    }
    let successors: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&k| {
            [(2 * k) % size, (2 * k + 1) % size]
                .iter()
                .filter_map(|t| nodes.binary_search(t).ok())
                .collect()
        })
        .collect();
    let recurrent = main_component(&successors);
    if recurrent.is_empty() {
        return Err(Error::EmptySystem);
    }
    Ok(MarkovSubsystem {
        level,
        delta: Some(delta.clone()),
        nodes,
        successors,
        brackets,
        recurrent,
    })
}

/// Period of a strongly connected graph: gcd of `level(u) + 1 - level(v)`
/// over its edges, with levels from breadth-first search.
pub(crate) fn graph_period(successors: &[Vec<usize>]) -> u64 {
    if successors.is_empty() {
        return 0;
    }
    let mut level = vec![u64::MAX; successors.len()];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &successors[u] {
            if level[v] == u64::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    for (u, succ) in successors.iter().enumerate() {
        for &v in succ {
            if level[u] != u64::MAX && level[v] != u64::MAX {
                g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g
}

/// `(irreducible, aperiodic)` for the recurrent part.
pub fn check_irreducible_aperiodic(m: &MarkovSubsystem) -> (bool, bool) {
    let (succ, _) = m.recurrent_graph();
    let irreducible = !succ.is_empty() && nontrivial_components(&succ).len() == 1
        && nontrivial_components(&succ)[0].len() == succ.len();
    let aperiodic = irreducible && graph_period(&succ) == 1;
    (irreducible, aperiodic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::enumerate_orbits;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn flat(n: usize) -> Vec<Bracket> {
        vec![Bracket { lower: 0.0, upper: 0.0 }; n]
    }

    #[test]
    fn half_example() {
        let m = build_subsystem(&Potential::rational(1, 2), &r(1, 8), 6).unwrap();
        assert_eq!(m.len(), 48);
        assert_eq!(m.nodes.first(), Some(&8));
        assert_eq!(m.nodes.last(), Some(&55));
        assert_eq!(check_irreducible_aperiodic(&m), (true, true));
        let a = m.node_of(&TorusPoint::rational(1, 3)).unwrap();
        let b = m.node_of(&TorusPoint::rational(2, 3)).unwrap();
        assert!(m.recurrent.contains(&a) && m.recurrent.contains(&b));
        assert!(m.has_edge(a, b) && m.has_edge(b, a));
        let (succ, _) = m.recurrent_graph();
        assert!(succ.iter().all(|s| !s.is_empty()));
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_subsystem(&Potential::rational(1, 2), &r(5, 8), 6).unwrap_err(),
            Error::EmptySystem
        );
        assert!(matches!(
            build_subsystem(&Potential::rational(0, 1), &r(1, 8), 6),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            build_subsystem(&Potential::rational(1, 2), &r(1, 8), 5),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn manual_graphs() {
        let two = MarkovSubsystem::from_graph(vec![vec![1], vec![0]], flat(2)).unwrap();
        assert_eq!(check_irreducible_aperiodic(&two), (true, false));
        let mixed = MarkovSubsystem::from_graph(vec![vec![0, 1], vec![2], vec![0]], flat(3)).unwrap();
        assert_eq!(check_irreducible_aperiodic(&mixed), (true, true));
        assert_eq!(
            MarkovSubsystem::from_graph(vec![vec![1], vec![]], flat(2)).unwrap_err(),
            Error::EmptySystem
        );
    }

    #[test]
    fn brackets_hold_on_nodes() {
        let p = Potential::rational(1, 3);
        let m = build_subsystem(&p, &r(1, 16), 8).unwrap();
        for (i, &k) in m.nodes.iter().enumerate() {
            let br = m.brackets[i];
            assert!(br.lower <= br.upper);
            for s in 1..8u64 {
                let x = TorusPoint::rational(BigInt::from(8 * k + s), BigInt::from(8u64) << m.level);
                let v = crate::dyadic::potential_eval(&p, &x).to_f64();
                assert!(v >= br.lower - 1e-14 && v <= br.upper + 1e-14, "node {k}");
            }
        }
    }

    #[test]
    fn contains_far_periodic_orbits() {
        for (c, delta, level) in [((1, 2), r(1, 16), 8), ((1, 3), r(1, 8), 7), ((2, 7), r(1, 32), 9)] {
            let p = Potential::rational(c.0, c.1);
            let m = build_subsystem(&p, &delta, level).unwrap();
            let margin = &delta + BigRational::new(2.into(), BigInt::one() << level);
            for o in enumerate_orbits(10).unwrap() {
                let pts = o.points();
                if pts.iter().any(|x| torus_distance(x, &p.b()).to_ratio() < margin) {
                    continue;
                }
                let ids: Vec<usize> = pts.iter().map(|x| m.node_of(x).expect("point in a node")).collect();
                for i in 0..ids.len() {
                    assert!(m.has_edge(ids[i], ids[(i + 1) % ids.len()]), "orbit {o}");
                }
            }
        }
    }
}
