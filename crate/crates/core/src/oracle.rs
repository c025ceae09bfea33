//! Query-model access to monotone functions on the grid.
//!
//! An [`Oracle`] answers point probes with points of the same shape. The
//! built-in instances are the hidden-point family (one nudge toward the
//! hidden vertex per probe), explicit lookup tables, the hypercube clamp
//! lift, and box restriction. [`make_counting`] wraps any oracle with an
//! exact probe counter; there is no caching, so repeat probes recount —
//! deduplication is a solver-level concern.

use std::cell::Cell;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{iterate_points_budgeted, GridShape, Point};
use crate::Result;

/// Query access to an unknown function `f : L_n^k -> L_n^k`.
///
/// Evaluation is pure: the same probe always yields the same answer within
/// one instance, and the answer always lies in the grid. Probes on points
/// that do not fit the shape are a caller bug and panic.
pub trait Oracle {
    fn shape(&self) -> GridShape;

    fn eval(&self, v: &Point) -> Point;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn shape(&self) -> GridShape {
        (**self).shape()
    }

    fn eval(&self, v: &Point) -> Point {
        (**self).eval(v)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn shape(&self) -> GridShape {
        (**self).shape()
    }

    fn eval(&self, v: &Point) -> Point {
        (**self).eval(v)
    }
}

/// Read handle on the number of probes an oracle has answered.
///
/// The count increments by exactly one per evaluation and never decreases.
#[derive(Debug, Clone)]
pub struct QueryCounter(Rc<Cell<u64>>);

impl QueryCounter {
    pub fn count(&self) -> u64 {
        self.0.get()
    }
}

/// An oracle plus the counter feeding its [`QueryCounter`] handle.
pub struct CountingOracle<O> {
    inner: O,
    counter: Rc<Cell<u64>>,
}

impl<O: Oracle> Oracle for CountingOracle<O> {
    fn shape(&self) -> GridShape {
        self.inner.shape()
    }

    fn eval(&self, v: &Point) -> Point {
        self.counter.set(self.counter.get() + 1);
        self.inner.eval(v)
    }
}

/// Wraps an oracle so every evaluation is counted.
pub fn make_counting<O: Oracle>(oracle: O) -> (CountingOracle<O>, QueryCounter) {
    let counter = Rc::new(Cell::new(0));
    let handle = QueryCounter(Rc::clone(&counter));
    (CountingOracle { inner: oracle, counter }, handle)
}

/// The hidden-point instance: the function `f^a` determined by a vertex `a`.
///
/// Coordinate `i` of a probe moves one step toward `a_i` when it is the
/// first coordinate that is too high (all earlier coordinates `<=` their
/// targets) or the first that is too low (all earlier coordinates `>=`).
/// Everything else is left alone, so a response differs from the probe in
/// at most two coordinates, each by exactly one. The unique fixed point
/// is `a` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenPointInstance {
    shape: GridShape,
    a: Point,
}

impl HiddenPointInstance {
    pub fn new(shape: GridShape, a: Point) -> Result<Self> {
        if !shape.contains(&a) {
            return Err(Error::InvalidPoint {
                shape,
                reason: format!("hidden point {a} outside grid"),
            });
        }
        Ok(HiddenPointInstance { shape, a })
    }

    /// The hidden vertex `a`.
    pub fn hidden_point(&self) -> &Point {
        &self.a
    }
}

impl Oracle for HiddenPointInstance {
    fn shape(&self) -> GridShape {
        self.shape
    }

    fn eval(&self, v: &Point) -> Point {
        assert!(self.shape.contains(v), "probe {v} outside grid {}", self.shape);
        let mut out = Vec::with_capacity(v.len());
        // Running prefix conditions: all earlier v_j <= a_j / all >= a_j.
        let mut prefix_le = true;
        let mut prefix_ge = true;
        for (&vi, &ai) in v.coords().iter().zip(self.a.coords()) {
            if vi > ai && prefix_le {
                out.push(vi - 1);
            } else if vi < ai && prefix_ge {
                out.push(vi + 1);
            } else {
                out.push(vi);
            }
            prefix_le &= vi <= ai;
            prefix_ge &= vi >= ai;
        }
        Point::from_coords(out)
    }
}

/// A function given by an explicit table over every point of the grid.
///
/// Output values are stored dense, indexed by the lexicographic rank of the
/// input. Totality and range are validated on construction; monotonicity is
/// not assumed — that is the verifier's job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableInstance {
    shape: GridShape,
    outputs: Vec<Point>,
}

impl TableInstance {
    /// Builds a table by evaluating `f` on every point of the grid.
    pub fn from_fn(shape: GridShape, f: impl Fn(&Point) -> Point) -> Result<Self> {
        let mut outputs = Vec::new();
        for p in iterate_points_budgeted(shape, crate::lattice::DEFAULT_ENUM_BUDGET)? {
            let out = f(&p);
            if !shape.contains(&out) {
                return Err(Error::InvalidInstance(format!(
                    "table output {out} for input {p} outside grid"
                )));
            }
            outputs.push(out);
        }
        Ok(TableInstance { shape, outputs })
    }

    /// Builds a table from `(input, output)` rows covering every point
    /// exactly once.
    pub fn from_rows(shape: GridShape, rows: &[(Point, Point)]) -> Result<Self> {
        let total = shape.enumerable(crate::lattice::DEFAULT_ENUM_BUDGET)? as usize;
        if rows.len() != total {
            return Err(Error::InvalidInstance(format!(
                "table has {} rows, grid has {} points",
                rows.len(),
                total
            )));
        }
        let mut outputs: Vec<Option<Point>> = vec![None; total];
        for (input, output) in rows {
            if !shape.contains(input) {
                return Err(Error::InvalidInstance(format!("input {input} outside grid")));
            }
            if !shape.contains(output) {
                return Err(Error::InvalidInstance(format!(
                    "output {output} for input {input} outside grid"
                )));
            }
            let rank = shape.lex_rank(input);
            if outputs[rank].is_some() {
                return Err(Error::InvalidInstance(format!("duplicate row for input {input}")));
            }
            outputs[rank] = Some(output.clone());
        }
        Ok(TableInstance {
            shape,
            outputs: outputs.into_iter().map(Option::unwrap).collect(),
        })
    }
}

impl Oracle for TableInstance {
    fn shape(&self) -> GridShape {
        self.shape
    }

    fn eval(&self, v: &Point) -> Point {
        assert!(self.shape.contains(v), "probe {v} outside grid {}", self.shape);
        self.outputs[self.shape.lex_rank(v)].clone()
    }
}

/// A hypercube function lifted to side length `n` through the clamp map
/// `g_i(v) = min(v_i, 1)`.
///
/// Exactly one inner query is spent per outer query. If the inner function
/// is monotone the lift is monotone, and the two share their fixed points.
#[derive(Debug, Clone)]
pub struct ClampLift<O> {
    inner: O,
    shape: GridShape,
}

impl<O: Oracle> ClampLift<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }
}

/// Lifts an oracle over `{0,1}^k` to the grid of side length `n`.
pub fn lift_clamp<O: Oracle>(inner: O, n: u32) -> Result<ClampLift<O>> {
    let inner_shape = inner.shape();
    if inner_shape.n() != 2 {
        return Err(Error::InvalidInstance(format!(
            "clamp lift requires a hypercube inner function, got {inner_shape}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "clamp lift target side length must be >= 2, got {n}"
        )));
    }
    let shape = GridShape::new(n, inner_shape.k())?;
    Ok(ClampLift { inner, shape })
}

impl<O: Oracle> Oracle for ClampLift<O> {
    fn shape(&self) -> GridShape {
        self.shape
    }

    fn eval(&self, v: &Point) -> Point {
        assert!(self.shape.contains(v), "probe {v} outside grid {}", self.shape);
        let clamped = Point::from_coords(v.coords().iter().map(|&c| c.min(1)).collect());
        self.inner.eval(&clamped)
    }
}

/// An oracle restricted to a box: responses are clamped into `[lo, hi]`.
///
/// The restriction maps the box into itself, stays monotone when the outer
/// function is, and spends one outer query per query.
#[derive(Debug, Clone)]
pub struct BoxRestricted<O> {
    outer: O,
    lo: Point,
    hi: Point,
}

/// Restricts `outer` to the box `[lo, hi]`.
pub fn restrict_box<O: Oracle>(outer: O, lo: Point, hi: Point) -> Result<BoxRestricted<O>> {
    let shape = outer.shape();
    if !shape.contains(&lo) || !shape.contains(&hi) {
        return Err(Error::InvalidInstance("box corner outside grid".to_string()));
    }
    if !lo.leq(&hi) {
        return Err(Error::InvalidBox);
    }
    Ok(BoxRestricted { outer, lo, hi })
}

impl<O: Oracle> Oracle for BoxRestricted<O> {
    fn shape(&self) -> GridShape {
        self.outer.shape()
    }

    fn eval(&self, v: &Point) -> Point {
        self.outer
            .eval(v)
            .clamp_to_box(&self.lo, &self.hi)
            .expect("box validated on construction")
    }
}

/// A self-contained, loadable instance description.
///
/// This is the JSON file format accepted by the CLI:
///
/// ```json
/// {"kind":"hidden-point","n":7,"k":2,"a":[2,4]}
/// {"kind":"table","n":2,"k":2,"rows":[[0,0,0,0],[0,1,0,1],[1,0,1,0],[1,1,1,1]]}
/// {"kind":"clamp-lift","n":4,"inner":{"kind":"hidden-point","n":2,"k":2,"a":[1,0]}}
/// ```
///
/// Table rows list the `k` input coordinates followed by the `k` output
/// coordinates and must cover all `n^k` inputs exactly once. A clamp-lift
/// inner instance must be a hidden-point or table over the hypercube.
#[derive(Debug, Clone)]
pub enum Instance {
    HiddenPoint(HiddenPointInstance),
    Table(TableInstance),
    ClampLift(Box<ClampLift<Instance>>),
}

impl Instance {
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(json)
            .map_err(|e| Error::InvalidInstance(e.to_string()))?;
        raw.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawInstance::from(self)).expect("instance serializes")
    }
}

impl Oracle for Instance {
    fn shape(&self) -> GridShape {
        match self {
            Instance::HiddenPoint(inst) => inst.shape(),
            Instance::Table(inst) => inst.shape(),
            Instance::ClampLift(lift) => lift.shape(),
        }
    }

    fn eval(&self, v: &Point) -> Point {
        match self {
            Instance::HiddenPoint(inst) => inst.eval(v),
            Instance::Table(inst) => inst.eval(v),
            Instance::ClampLift(lift) => lift.eval(v),
        }
    }
}

/// Wire form of [`Instance`]; kept separate so validation happens once.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawInstance {
    HiddenPoint {
        n: u32,
        k: u32,
        a: Vec<u32>,
    },
    Table {
        n: u32,
        k: u32,
        rows: Vec<Vec<u32>>,
    },
    ClampLift {
        n: u32,
        inner: Box<RawInstance>,
    },
}

impl RawInstance {
    fn build(self) -> Result<Instance> {
        match self {
            RawInstance::HiddenPoint { n, k, a } => {
                let shape = GridShape::new(n, k)?;
                let a = Point::new(a, shape)?;
                Ok(Instance::HiddenPoint(HiddenPointInstance::new(shape, a)?))
            }
            RawInstance::Table { n, k, rows } => {
                let shape = GridShape::new(n, k)?;
                let dim = shape.dim();
                let rows = rows
                    .into_iter()
                    .map(|row| {
                        if row.len() != 2 * dim {
                            return Err(Error::InvalidInstance(format!(
                                "table row must have {} values (k inputs, k outputs), got {}",
                                2 * dim,
                                row.len()
                            )));
                        }
                        let input = Point::from_coords(row[..dim].to_vec());
                        let output = Point::from_coords(row[dim..].to_vec());
                        Ok((input, output))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::Table(TableInstance::from_rows(shape, &rows)?))
            }
            RawInstance::ClampLift { n, inner } => {
                if matches!(*inner, RawInstance::ClampLift { .. }) {
                    return Err(Error::InvalidInstance(
                        "clamp-lift inner must be a hidden-point or table instance".to_string(),
                    ));
                }
                let inner = inner.build()?;
                Ok(Instance::ClampLift(Box::new(lift_clamp(inner, n)?)))
            }
        }
    }
}

impl From<&Instance> for RawInstance {
    fn from(instance: &Instance) -> Self {
        match instance {
            Instance::HiddenPoint(inst) => RawInstance::HiddenPoint {
                n: inst.shape().n(),
                k: inst.shape().k(),
                a: inst.hidden_point().coords().to_vec(),
            },
            Instance::Table(table) => {
                let shape = table.shape();
                let rows = crate::lattice::iterate_points(shape)
                    .expect("table shapes are within budget")
                    .map(|input| {
                        let mut row = input.coords().to_vec();
                        row.extend_from_slice(table.eval(&input).coords());
                        row
                    })
                    .collect();
                RawInstance::Table {
                    n: shape.n(),
                    k: shape.k(),
                    rows,
                }
            }
            Instance::ClampLift(lift) => RawInstance::ClampLift {
                n: lift.shape().n(),
                inner: Box::new(RawInstance::from(lift.inner())),
            },
        }
    }
}
