//! Points of the inverse limit as (head, code) pairs with expanded threads,
//! brick intervals, and the shift homeomorphism.
//!
//! Closure points of a brick (a thread entry equal to ρ where the code says 1)
//! keep the code of the brick they bound. This is how `branch_inverse(1, 0) = ρ`
//! is used and how the closed arcs of case 3b are reached.

use std::fmt;

use crate::codes::{is_admissible, Tail, TypeCode};
use crate::error::{Error, Result};
use crate::map_family::{CaseLabel, UnimodalMap};

pub const DEFAULT_DEPTH: usize = 64;
/// Endpoints within this distance of ρ are identified with ρ.
const SNAP: f64 = 1e-13;
/// Bricks narrower than this after convergence collapse to their landmark point.
const DEGENERATE_WIDTH: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrickInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub converged: bool,
}

impl BrickInterval {
    fn unit() -> Self {
        BrickInterval { lo: 0.0, hi: 1.0, lo_closed: true, hi_closed: true, converged: true }
    }

    fn point(x: f64) -> Self {
        BrickInterval { lo: x, hi: x, lo_closed: true, hi_closed: true, converged: true }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo)) && (x < self.hi || (self.hi_closed && x == self.hi))
    }

    pub fn contains_closure(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    fn same_shape(&self, other: &BrickInterval) -> bool {
        // Closure flags of a collapsing interval may keep alternating.
        (self.width() - other.width()).abs() < 1e-12
            && ((self.lo_closed == other.lo_closed && self.hi_closed == other.hi_closed)
                || self.width() < DEGENERATE_WIDTH)
    }

    /// Intersection with the domain of `branch`: `[0, ρ]` or `(ρ, 1]`.
    fn restrict(mut self, map: &UnimodalMap, branch: u8) -> Option<Self> {
        let rho = map.rho;
        for v in [&mut self.lo, &mut self.hi] {
            if (*v - rho).abs() <= SNAP {
                *v = rho;
            }
        }
        if branch == 0 {
            if self.hi >= rho {
                self.hi_closed = if self.hi > rho { true } else { self.hi_closed };
                self.hi = rho;
            }
        } else if self.lo <= rho {
            self.lo = rho;
            self.lo_closed = false;
        }
        let empty = self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed));
        (!empty).then_some(self)
    }

    fn image(self, map: &UnimodalMap, branch: u8) -> Self {
        if branch == 0 {
            BrickInterval {
                lo: map.f0_value(self.hi).max(0.0),
                hi: map.f0_value(self.lo),
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
                converged: self.converged,
            }
        } else {
            BrickInterval { lo: map.f1_value(self.lo).max(0.0), hi: map.f1_value(self.hi).min(1.0), ..self }
        }
    }

    fn pull(self, map: &UnimodalMap, branch: u8) -> Option<Self> {
        Some(self.restrict(map, branch)?.image(map, branch))
    }
}

impl fmt::Display for BrickInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

fn tail_period(tail: Tail) -> usize {
    match tail {
        Tail::AllZeros | Tail::AllOnes => 1,
        Tail::Alt10 | Tail::Alt01 => 2,
    }
}

/// Landmark value of thread entries past the prefix when the tail set is a single attracting orbit.
fn degenerate_tail_value(map: &UnimodalMap, tail: Tail, symbol: u8) -> Option<f64> {
    let l = map.landmarks();
    match (map.case(), tail) {
        (CaseLabel::Case1, Tail::AllZeros) => Some(l.omega0),
        (CaseLabel::Case3a, Tail::Alt10 | Tail::Alt01) => {
            if symbol == 1 {
                l.w2
            } else {
                l.w1
            }
        }
        _ => None,
    }
}

/// Head of the single thread whose code is the bare degenerate `tail`.
fn degenerate_tail_point(map: &UnimodalMap, tail: Tail) -> Option<f64> {
    let l = map.landmarks();
    match (map.case(), tail) {
        (CaseLabel::Case1, Tail::AllZeros) => Some(l.omega0),
        (CaseLabel::Case3a, Tail::Alt10) => l.w1,
        (CaseLabel::Case3a, Tail::Alt01) => l.w2,
        _ => None,
    }
}

/// `Φ` of the brick with code `t`: the tail set by nested iteration, then the prefix pulled back.
pub fn brick_interval(map: &UnimodalMap, t: &TypeCode, depth: usize) -> Result<BrickInterval> {
    let empty = || Error::EmptyBrick { code: t.to_string() };
    let tail = t.tail();
    let period = tail_period(tail);
    let mut j = BrickInterval::unit();
    j.converged = false;
    for _ in 0..depth.max(1) {
        let mut next = j;
        for s in (0..period).rev() {
            let b = tail.at(s);
            next = next.pull(map, b).ok_or_else(empty)?;
        }
        let done = next.same_shape(&j);
        j = next;
        if done {
            j.converged = true;
            break;
        }
    }
    if j.converged && j.width() < DEGENERATE_WIDTH {
        if let Some(x) = degenerate_tail_point(map, tail) {
            j = BrickInterval::point(x);
        }
    }
    for k in (0..t.prefix().len()).rev() {
        let converged = j.converged;
        j = j.pull(map, t.at(k)).ok_or_else(empty)?;
        j.converged = converged;
    }
    Ok(j)
}

/// A point of the inverse limit: head `x0`, its code and the thread `x_0, …, x_depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    code: TypeCode,
    thread: Vec<f64>,
}

impl LimitPoint {
    pub fn x0(&self) -> f64 {
        self.thread[0]
    }

    pub fn code(&self) -> &TypeCode {
        &self.code
    }

    pub fn thread(&self) -> &[f64] {
        &self.thread
    }

    pub fn depth(&self) -> usize {
        self.thread.len() - 1
    }

    /// CSV row: x0, code, depth, thread entries.
    pub fn csv_row(&self) -> String {
        let mut row = format!("{:.16e},{},{}", self.x0(), self.code, self.depth());
        for x in &self.thread {
            row.push_str(&format!(",{x:.16e}"));
        }
        row
    }
}

/// The thread entry `x_{k+1}` following `x_k = x` under code symbol `k`.
fn next_entry(map: &UnimodalMap, code: &TypeCode, k: usize, x: f64) -> Result<f64> {
    let b = code.at(k);
    if k >= code.prefix().len() {
        if let Some(v) = degenerate_tail_value(map, code.tail(), b) {
            if (map.eval(v) - x).abs() > 1e-9 {
                return Err(Error::Image { branch: b, y: x, step: Some(k) });
            }
            return Ok(v);
        }
    }
    map.branch_inverse(b, x).map_err(|_| Error::Image { branch: b, y: x, step: Some(k) })
}

pub fn decode_point(map: &UnimodalMap, x0: f64, t: &TypeCode, depth: usize) -> Result<LimitPoint> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::Domain { x: x0 });
    }
    let mut thread = Vec::with_capacity(depth + 1);
    thread.push(x0);
    for k in 0..depth {
        let next = next_entry(map, t, k, thread[k])?;
        thread.push(next);
    }
    Ok(LimitPoint { code: t.clone(), thread })
}

pub fn shift(map: &UnimodalMap, p: &LimitPoint) -> LimitPoint {
    let x0 = p.x0();
    let b = if x0 <= map.rho { 0 } else { 1 };
    let mut code = p.code.prepend(b);
    if x0 == map.rho && !matches!(map.case(), CaseLabel::OutsideF2n(_)) && !is_admissible(map.case(), &code) {
        // x0 = ρ bounds a branch-1 brick; keep the closure convention.
        let alt = p.code.prepend(1);
        if is_admissible(map.case(), &alt) {
            code = alt;
        }
    }
    let mut thread = Vec::with_capacity(p.thread.len());
    thread.push(map.eval(x0));
    thread.extend_from_slice(&p.thread[..p.thread.len() - 1]);
    LimitPoint { code, thread }
}

pub fn unshift(map: &UnimodalMap, p: &LimitPoint) -> Result<LimitPoint> {
    let depth = p.depth();
    if depth == 0 {
        return Err(Error::DepthExhausted);
    }
    let mut thread = p.thread[1..].to_vec();
    thread.push(next_entry(map, &p.code, depth, p.thread[depth])?);
    Ok(LimitPoint { code: p.code.drop_first(), thread })
}

/// The factor map `Φ`.
pub fn factor(p: &LimitPoint) -> f64 {
    p.x0()
}
