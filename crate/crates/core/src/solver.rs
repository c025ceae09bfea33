//! Fixed-point search in the query model.
//!
//! All solvers count every probe they issue, including the probe that
//! witnesses `f(p) = p`. [`kleene_from_bottom`] and [`kleene_from_top`]
//! follow the function from a lattice corner and terminate on a witnessed
//! fixed point by construction. [`dnc_fixed_point`] runs the recursive
//! binary-search scheme over boxes and checks the raw response at its
//! candidate, falling back to Kleene ascent if the candidate is not a
//! genuine fixed point. [`solve_hidden_family`] is the interval solver for
//! the hidden-point family and relies on that family's promise instead of a
//! final confirmation probe; it validates every response against the family
//! and reports an error on streams no hidden-point function could produce.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::lattice::{GridShape, Point};
use crate::oracle::Oracle;
use crate::Result;

/// Which solver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Kleene iteration from the bottom corner; least fixed point.
    KleeneBottom,
    /// Kleene iteration from the top corner; greatest fixed point.
    KleeneTop,
    /// Recursive divide-and-conquer over boxes.
    DivideConquer,
    /// The interval solver specialized to the hidden-point family.
    HiddenFamily,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::KleeneBottom,
        Algorithm::KleeneTop,
        Algorithm::DivideConquer,
        Algorithm::HiddenFamily,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::KleeneBottom => "kleene",
            Algorithm::KleeneTop => "kleene-top",
            Algorithm::DivideConquer => "dnc",
            Algorithm::HiddenFamily => "family",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "kleene" => Ok(Algorithm::KleeneBottom),
            "kleene-top" => Ok(Algorithm::KleeneTop),
            "dnc" => Ok(Algorithm::DivideConquer),
            "family" => Ok(Algorithm::HiddenFamily),
            other => Err(format!(
                "unknown algorithm {other:?} (expected kleene, kleene-top, dnc, or family)"
            )),
        }
    }
}

/// Solver configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Record every (query, response) pair. Off by default; traces cost
    /// memory proportional to the query count.
    pub record_trace: bool,
}

/// Result of a solve: the claimed fixed point and exact query accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutcome {
    pub point: Point,
    pub queries: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(Point, Point)>>,
}

/// Componentwise interval of still-possible hidden-point values: `x` is the
/// minimum possible value of each `a_i`, `y` the maximum. Solved when `x = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalState {
    pub x: Point,
    pub y: Point,
}

impl IntervalState {
    pub fn full(shape: GridShape) -> Self {
        IntervalState {
            x: shape.bottom(),
            y: shape.top(),
        }
    }

    pub fn solved(&self) -> bool {
        self.x == self.y
    }

    pub fn resolved(&self, i: usize) -> bool {
        self.x.get(i) == self.y.get(i)
    }
}

/// Counts probes and optionally records the trace for one solve.
struct Probe<'a, O: ?Sized> {
    oracle: &'a O,
    queries: u64,
    trace: Option<Vec<(Point, Point)>>,
}

impl<'a, O: Oracle + ?Sized> Probe<'a, O> {
    fn new(oracle: &'a O, options: &SolveOptions) -> Self {
        Probe {
            oracle,
            queries: 0,
            trace: options.record_trace.then(Vec::new),
        }
    }

    fn query(&mut self, v: &Point) -> Point {
        let response = self.oracle.eval(v);
        self.queries += 1;
        if let Some(trace) = &mut self.trace {
            trace.push((v.clone(), response.clone()));
        }
        response
    }

    fn finish(self, point: Point) -> SolveOutcome {
        SolveOutcome {
            point,
            queries: self.queries,
            trace: self.trace,
        }
    }
}

/// Dispatches to the named solver.
pub fn solve<O: Oracle + ?Sized>(
    algorithm: Algorithm,
    oracle: &O,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    match algorithm {
        Algorithm::KleeneBottom => kleene_from_bottom(oracle, options),
        Algorithm::KleeneTop => kleene_from_top(oracle, options),
        Algorithm::DivideConquer => dnc_fixed_point(oracle, options),
        Algorithm::HiddenFamily => solve_hidden_family(oracle, options),
    }
}

fn kleene_step_cap(shape: GridShape) -> u64 {
    shape.k() as u64 * (shape.n() as u64 - 1) + 1
}

/// Runs the iteration `v <- f(v)` until fixed, checking that the chain stays
/// an ascent (or descent). A monotone oracle can never break the direction
/// or outlast the cap, so either event reports a non-monotone oracle.
fn kleene_run<O: Oracle + ?Sized>(
    probe: &mut Probe<'_, O>,
    start: Point,
    ascending: bool,
) -> Result<Point> {
    let cap = kleene_step_cap(probe.oracle.shape());
    let mut v = start;
    for _ in 0..cap {
        let r = probe.query(&v);
        if r == v {
            return Ok(v);
        }
        let direction_ok = if ascending { v.leq(&r) } else { r.leq(&v) };
        if !direction_ok {
            return Err(Error::NonMonotoneOracle(format!(
                "iteration moved against the {} direction at {v}",
                if ascending { "ascent" } else { "descent" }
            )));
        }
        v = r;
    }
    Err(Error::NonMonotoneOracle(format!(
        "no fixed point within {cap} iterations"
    )))
}

/// Path-following from the bottom corner: returns the least fixed point of a
/// monotone oracle in at most `k(n-1) + 1` queries.
pub fn kleene_from_bottom<O: Oracle + ?Sized>(
    oracle: &O,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    let mut probe = Probe::new(oracle, options);
    let point = kleene_run(&mut probe, oracle.shape().bottom(), true)?;
    Ok(probe.finish(point))
}

/// Mirror image of [`kleene_from_bottom`]: descends from the top corner to
/// the greatest fixed point.
pub fn kleene_from_top<O: Oracle + ?Sized>(
    oracle: &O,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    let mut probe = Probe::new(oracle, options);
    let point = kleene_run(&mut probe, oracle.shape().top(), false)?;
    Ok(probe.finish(point))
}

/// Divide-and-conquer search inside the box `[lo, hi]`.
///
/// Coordinates at positions `>= dim` are pinned (`lo` equals `hi` there);
/// the call finds a point of the box fixed under the box-clamped function
/// and returns it together with the *raw* oracle response observed at it.
/// The search halves the last active coordinate: it solves the middle slice
/// through clamping, then uses the raw value of the search coordinate at the
/// slice solution to decide which half can be discarded. The slice solution
/// itself becomes the corner of the surviving half.
fn dnc_search<O: Oracle + ?Sized>(
    probe: &mut Probe<'_, O>,
    mut lo: Point,
    mut hi: Point,
    dim: usize,
) -> (Point, Point) {
    if dim == 0 {
        let response = probe.query(&lo);
        return (lo, response);
    }
    let c = dim - 1;
    loop {
        if lo.get(c) == hi.get(c) {
            return dnc_search(probe, lo, hi, dim - 1);
        }
        // Midpoint with ties broken low.
        let mid = lo.get(c) + (hi.get(c) - lo.get(c)) / 2;
        let (p, r) = dnc_search(probe, lo.with(c, mid), hi.with(c, mid), dim - 1);
        let d = r.get(c);
        if d.clamp(lo.get(c), hi.get(c)) == mid {
            // The slice solution is fixed under this box's clamp too.
            return (p, r);
        }
        if d > mid {
            // A fixed point lives above the slice solution.
            lo = p.with(c, mid + 1);
        } else {
            hi = p.with(c, mid - 1);
        }
    }
}

/// Recursive divide-and-conquer solver for monotone oracles.
///
/// Base case `k = 1` is binary search on the chain; higher dimensions binary
/// search the last coordinate, solving each middle slice as a
/// `(k-1)`-dimensional box-restricted problem. The final candidate's raw
/// response doubles as its confirmation; if it is not a genuine fixed point
/// (possible only off the monotone contract), the solver falls back to
/// Kleene ascent, so the returned point is always witnessed fixed.
pub fn dnc_fixed_point<O: Oracle + ?Sized>(
    oracle: &O,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    let shape = oracle.shape();
    let mut probe = Probe::new(oracle, options);
    let (point, response) = dnc_search(&mut probe, shape.bottom(), shape.top(), shape.dim());
    if response == point {
        return Ok(probe.finish(point));
    }
    // Safety net: the candidate failed its confirmation, so the recursion's
    // box bookkeeping was invalidated somewhere. Kleene ascent from the
    // bottom corner is unconditionally correct for monotone oracles.
    let point = kleene_run(&mut probe, shape.bottom(), true)?;
    Ok(probe.finish(point))
}

/// Checks a response against the structure every hidden-point function has:
/// coordinates move by at most one, with at most one decrement and one
/// increment, and never at a coordinate whose value is already pinned.
fn check_family_response(
    v: &Point,
    r: &Point,
    state: &IntervalState,
) -> Result<Option<usize>> {
    let mut decrement = None;
    let mut increments = 0;
    for i in 0..v.len() {
        let (vi, ri) = (v.get(i), r.get(i));
        let delta = ri as i64 - vi as i64;
        match delta {
            0 => {}
            -1 => {
                if decrement.is_some() {
                    return Err(Error::NotFamilyOracle(format!(
                        "response {r} to {v} decrements two coordinates"
                    )));
                }
                if state.resolved(i) {
                    return Err(Error::NotFamilyOracle(format!(
                        "response {r} to {v} decrements coordinate {} already pinned to {}",
                        i + 1,
                        state.x.get(i)
                    )));
                }
                decrement = Some(i);
            }
            1 => {
                increments += 1;
                if increments > 1 {
                    return Err(Error::NotFamilyOracle(format!(
                        "response {r} to {v} increments two coordinates"
                    )));
                }
            }
            _ => {
                return Err(Error::NotFamilyOracle(format!(
                    "response {r} to {v} moves coordinate {} by more than 1",
                    i + 1
                )));
            }
        }
    }
    Ok(decrement)
}

/// The interval solver for the hidden-point family: `O(k + n)` queries.
///
/// It maintains per-coordinate intervals `[x_i, y_i]` of still-possible
/// hidden values and probes the vertex sitting one above `x` on every
/// unresolved coordinate. A decremented coordinate pins its value; a
/// response with no decrement rules out `x_i` for every unresolved `i`.
/// Each query either pins a coordinate (at most `k` times) or raises the
/// floor (at most `n - 1` times), so at most `k + n - 1` queries are spent.
///
/// Correctness rests on the promise that the oracle is some `f^a`; responses
/// that promise cannot produce surface as [`Error::NotFamilyOracle`].
pub fn solve_hidden_family<O: Oracle + ?Sized>(
    oracle: &O,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    let shape = oracle.shape();
    let dim = shape.dim();
    let mut probe = Probe::new(oracle, options);
    let mut state = IntervalState::full(shape);
    while !state.solved() {
        let v = Point::from_coords(
            (0..dim)
                .map(|i| {
                    if state.resolved(i) {
                        state.x.get(i)
                    } else {
                        state.x.get(i) + 1
                    }
                })
                .collect(),
        );
        let r = probe.query(&v);
        match check_family_response(&v, &r, &state)? {
            Some(j) => {
                // a_j >= x_j and a_j < x_j + 1, so a_j = x_j.
                state.y = state.y.with(j, state.x.get(j));
            }
            None => {
                for i in 0..dim {
                    if !state.resolved(i) {
                        state.x = state.x.with(i, state.x.get(i) + 1);
                    }
                }
                if state.solved() {
                    // The probe just issued was exactly the candidate, so a
                    // genuine family oracle must have answered it fixed.
                    if r != v {
                        return Err(Error::NotFamilyOracle(format!(
                            "candidate {v} answered {r} instead of itself"
                        )));
                    }
                }
            }
        }
    }
    let point = state.x;
    Ok(probe.finish(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{make_counting, HiddenPointInstance, TableInstance};

    fn pt(coords: &[u32]) -> Point {
        Point::from_coords(coords.to_vec())
    }

    fn hidden(n: u32, k: u32, a: &[u32]) -> HiddenPointInstance {
        let shape = GridShape::new(n, k).unwrap();
        HiddenPointInstance::new(shape, pt(a)).unwrap()
    }

    fn identity(n: u32, k: u32) -> TableInstance {
        TableInstance::from_fn(GridShape::new(n, k).unwrap(), |v| v.clone()).unwrap()
    }

    #[test]
    fn kleene_bottom_follows_the_staircase() {
        let opts = SolveOptions { record_trace: true };
        let outcome = kleene_from_bottom(&hidden(7, 2, &[2, 4]), &opts).unwrap();
        assert_eq!(outcome.point, pt(&[2, 4]));
        assert_eq!(outcome.queries, 7);
        let queries: Vec<Point> = outcome
            .trace
            .unwrap()
            .into_iter()
            .map(|(q, _)| q)
            .collect();
        assert_eq!(
            queries,
            vec![
                pt(&[0, 0]),
                pt(&[1, 0]),
                pt(&[2, 0]),
                pt(&[2, 1]),
                pt(&[2, 2]),
                pt(&[2, 3]),
                pt(&[2, 4]),
            ]
        );
    }

    #[test]
    fn kleene_bottom_fixed_bottom_is_one_query() {
        let outcome =
            kleene_from_bottom(&hidden(5, 3, &[0, 0, 0]), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[0, 0, 0]));
        assert_eq!(outcome.queries, 1);
    }

    #[test]
    fn kleene_bottom_identity_is_one_query() {
        let outcome = kleene_from_bottom(&identity(3, 2), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[0, 0]));
        assert_eq!(outcome.queries, 1);
    }

    #[test]
    fn kleene_top_descends_to_the_hidden_point() {
        let outcome = kleene_from_top(&hidden(7, 2, &[2, 4]), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[2, 4]));
        // 1 + (6-2) + (6-4)
        assert_eq!(outcome.queries, 7);
    }

    #[test]
    fn kleene_top_identity_and_top_instance() {
        let outcome = kleene_from_top(&identity(3, 2), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[2, 2]));
        assert_eq!(outcome.queries, 1);

        let outcome = kleene_from_top(&hidden(4, 2, &[3, 3]), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[3, 3]));
        assert_eq!(outcome.queries, 1);
    }

    #[test]
    fn kleene_rejects_non_monotone_oracle() {
        // The swap map has no fixed point at all.
        let shape = GridShape::new(2, 1).unwrap();
        let swap = TableInstance::from_fn(shape, |v| pt(&[1 - v.get(0)])).unwrap();
        assert!(matches!(
            kleene_from_bottom(&swap, &SolveOptions::default()),
            Err(Error::NonMonotoneOracle(_))
        ));
    }

    #[test]
    fn queries_match_an_external_counter() {
        let (oracle, counter) = make_counting(hidden(7, 2, &[2, 4]));
        let outcome = kleene_from_bottom(&oracle, &SolveOptions::default()).unwrap();
        assert_eq!(outcome.queries, counter.count());
    }

    #[test]
    fn dnc_chain_binary_search() {
        let opts = SolveOptions { record_trace: true };
        let outcome = dnc_fixed_point(&hidden(7, 1, &[2]), &opts).unwrap();
        assert_eq!(outcome.point, pt(&[2]));
        assert_eq!(outcome.queries, 3);
        let queries: Vec<Point> = outcome
            .trace
            .unwrap()
            .into_iter()
            .map(|(q, _)| q)
            .collect();
        assert_eq!(queries, vec![pt(&[3]), pt(&[1]), pt(&[2])]);
    }

    #[test]
    fn dnc_two_point_chain() {
        let outcome = dnc_fixed_point(&hidden(2, 1, &[1]), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[1]));
        assert_eq!(outcome.queries, 2);
    }

    #[test]
    fn dnc_grid_beats_the_path_bound() {
        let outcome = dnc_fixed_point(&hidden(7, 2, &[2, 4]), &SolveOptions::default()).unwrap();
        assert_eq!(outcome.point, pt(&[2, 4]));
        // Worst case for path-following on this grid is 2*(7-1) + 1 = 13.
        assert!(outcome.queries < 13, "queries = {}", outcome.queries);
        assert_eq!(outcome.queries, 6);
    }

    #[test]
    fn dnc_handles_every_hidden_point_on_a_small_grid() {
        let shape = GridShape::new(5, 2).unwrap();
        for a in crate::lattice::iterate_points(shape).unwrap() {
            let inst = HiddenPointInstance::new(shape, a.clone()).unwrap();
            let outcome = dnc_fixed_point(&inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, a);
        }
    }

    #[test]
    fn family_solver_pins_then_sweeps() {
        let opts = SolveOptions { record_trace: true };
        let outcome = solve_hidden_family(&hidden(2, 3, &[1, 0, 1]), &opts).unwrap();
        assert_eq!(outcome.point, pt(&[1, 0, 1]));
        assert_eq!(outcome.queries, 2);
        let trace = outcome.trace.unwrap();
        assert_eq!(trace[0].0, pt(&[1, 1, 1]));
        assert_eq!(trace[1].0, pt(&[1, 0, 1]));
    }

    #[test]
    fn family_solver_all_zero_target_needs_k_queries() {
        for k in [1u32, 3, 6] {
            let inst = hidden(2, k, &vec![0; k as usize]);
            let outcome = solve_hidden_family(&inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, pt(&vec![0; k as usize]));
            assert_eq!(outcome.queries, k as u64);
        }
    }

    #[test]
    fn family_solver_chain_max_target_needs_n_minus_1_queries() {
        for n in [2u32, 5, 9] {
            let inst = hidden(n, 1, &[n - 1]);
            let outcome = solve_hidden_family(&inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, pt(&[n - 1]));
            assert_eq!(outcome.queries, (n - 1) as u64);
        }
    }

    #[test]
    fn family_solver_stays_within_k_plus_n() {
        let shape = GridShape::new(4, 3).unwrap();
        for a in crate::lattice::iterate_points(shape).unwrap() {
            let inst = HiddenPointInstance::new(shape, a.clone()).unwrap();
            let outcome = solve_hidden_family(&inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, a);
            assert!(outcome.queries <= 7);
        }
    }

    #[test]
    fn family_solver_rejects_big_jumps() {
        // f(v) = top for every v: jumps by more than 1 on the first probe
        // whenever n > 2.
        let shape = GridShape::new(4, 2).unwrap();
        let top = shape.top();
        let always_top = TableInstance::from_fn(shape, |_| top.clone()).unwrap();
        assert!(matches!(
            solve_hidden_family(&always_top, &SolveOptions::default()),
            Err(Error::NotFamilyOracle(_))
        ));
    }

    #[test]
    fn family_solver_rejects_double_decrement() {
        let shape = GridShape::new(3, 2).unwrap();
        let sub = TableInstance::from_fn(shape, |v| {
            pt(&[v.get(0).saturating_sub(1), v.get(1).saturating_sub(1)])
        })
        .unwrap();
        assert!(matches!(
            solve_hidden_family(&sub, &SolveOptions::default()),
            Err(Error::NotFamilyOracle(_))
        ));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn solve_dispatches_by_algorithm() {
        let inst = hidden(7, 2, &[2, 4]);
        for algo in Algorithm::ALL {
            let outcome = solve(algo, &inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, pt(&[2, 4]), "algorithm {algo}");
        }
    }

    #[test]
    fn single_point_grid_is_trivial_for_everyone() {
        let inst = hidden(1, 3, &[0, 0, 0]);
        for algo in Algorithm::ALL {
            let outcome = solve(algo, &inst, &SolveOptions::default()).unwrap();
            assert_eq!(outcome.point, pt(&[0, 0, 0]));
            assert!(outcome.queries <= 1);
        }
    }
}
