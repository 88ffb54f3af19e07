//! The two-hyperbola unimodal map: a decreasing Möbius branch on `[0, ρ]` and the
//! increasing linear branch `(x − ρ)/(1 − ρ)` on `(ρ, 1]`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;

/// Default tolerance for detecting `ρ = ρ1` and neutral multipliers.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
/// Slack accepted when a preimage request lands just outside a branch image.
pub const IMAGE_SLACK: f64 = 1e-10;

const CENSUS_BURN_IN: usize = 500;
const CENSUS_MAX_ROUNDS: usize = 16;
const CLUSTER_GAP: f64 = 0.02;
const MIN_INTERVAL_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutsideReason {
    /// ρ < ρ1 but no period-two orbit straddles ρ.
    NoTwoCycle,
    /// The two-cycle repels and the involution identity fails.
    RepellingCycle,
    /// |multiplier| within the tie tolerance of 1 but the trace test fails.
    NeutralCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    Case1,
    Case2,
    Case3a,
    Case3b,
    OutsideF2n(OutsideReason),
}

impl CaseLabel {
    /// The exponent N of the F_{2^N} class.
    pub fn n(&self) -> Option<u32> {
        match self {
            CaseLabel::Case1 => Some(0),
            CaseLabel::Case2 | CaseLabel::Case3a => Some(1),
            CaseLabel::Case3b => Some(2),
            CaseLabel::OutsideF2n(_) => None,
        }
    }

    pub fn is_case3(&self) -> bool {
        matches!(self, CaseLabel::Case3a | CaseLabel::Case3b)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::Case1 => "Case 1",
            CaseLabel::Case2 => "Case 2",
            CaseLabel::Case3a => "Case 3a",
            CaseLabel::Case3b => "Case 3b",
            CaseLabel::OutsideF2n(_) => "outside F_{2^n}",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::OutsideF2n(reason) => {
                let why = match reason {
                    OutsideReason::NoTwoCycle => "no two-cycle across the turning point",
                    OutsideReason::RepellingCycle => "repelling two-cycle without involution",
                    OutsideReason::NeutralCycle => "neutral two-cycle without involution",
                };
                write!(f, "outside F_{{2^n}} ({why})")
            }
            other => match other.n() {
                Some(n) => write!(f, "{} (n={n})", other.name()),
                None => f.write_str(other.name()),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmarks {
    pub rho1: f64,
    pub omega0: f64,
    pub omega0_multiplier: f64,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub cycle_multiplier: Option<f64>,
    pub f_rho1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicInterval {
    pub lo: f64,
    pub hi: f64,
    pub period: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodCensus {
    pub detected_periods: BTreeSet<u32>,
    /// `Some(N)` when every grid point settled on a period and `Fix(f^{2^N}) = Fix(f^{2^{N+1}})`.
    pub stabilization_n: Option<u32>,
    pub periodic_intervals: Vec<PeriodicInterval>,
    /// Grid points whose orbit showed no period up to `p_max`.
    pub unresolved: usize,
}

impl PeriodCensus {
    pub fn max_period(&self) -> Option<u32> {
        self.detected_periods.iter().next_back().copied()
    }

    /// Whether the census is consistent with the classifier's label.
    pub fn agrees_with(&self, case: CaseLabel) -> bool {
        if self.stabilization_n.is_none() {
            return false;
        }
        match case {
            CaseLabel::Case1 => self.detected_periods.iter().eq([1].iter()),
            CaseLabel::Case2 | CaseLabel::Case3a => self.max_period() == Some(2),
            CaseLabel::Case3b => self.max_period() == Some(4),
            CaseLabel::OutsideF2n(_) => false,
        }
    }
}

/// The endpoint of the embedded ray in cases 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEndpoint {
    Finite { value: f64, remainder_bound: f64 },
    NegInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodalMap {
    pub rho: f64,
    pub delta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub f0: MoebiusTransform,
    pub f1: MoebiusTransform,
    pub rho1: f64,
    landmarks: Landmarks,
    case: CaseLabel,
}

// Negated comparisons so that NaN parameters fail every check.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_constraints(rho: f64, delta: f64, gamma: f64, alpha: f64) -> Result<()> {
    let mut violated = Vec::new();
    if [rho, delta, gamma, alpha].iter().any(|v| !v.is_finite()) {
        violated.push("finite parameters");
    }
    if !(rho > 0.0 && rho < 1.0) {
        violated.push("0<ρ<1");
    }
    if !(delta > 0.0) {
        violated.push("δ>0");
    }
    if violated.is_empty() {
        let bound = -delta / rho;
        if !(gamma > bound) {
            violated.push("γ>−δ/ρ");
        }
        if !(alpha > bound) {
            violated.push("α>−δ/ρ");
        }
    }
    if !(alpha < 0.0) {
        violated.push("α<0");
    }
    if !violated.is_empty() {
        return Err(Error::Constraint(violated));
    }
    if (gamma * rho + delta) < 1e-14 {
        return Err(Error::PoleOnDomain);
    }
    Ok(())
}

impl UnimodalMap {
    /// Validates the parameter tuple and caches landmarks and the case label.
    pub fn new(rho: f64, delta: f64, gamma: f64, alpha: f64) -> Result<Self> {
        check_constraints(rho, delta, gamma, alpha)?;
        let f0 = MoebiusTransform::new(alpha, -alpha * rho, gamma, delta)?;
        let f1 = MoebiusTransform::new(1.0, -rho, 0.0, 1.0 - rho)?;
        let rho1 = -alpha * rho / delta;
        let mut map = UnimodalMap {
            rho,
            delta,
            gamma,
            alpha,
            f0,
            f1,
            rho1,
            landmarks: Landmarks {
                rho1,
                omega0: f64::NAN,
                omega0_multiplier: f64::NAN,
                w1: None,
                w2: None,
                cycle_multiplier: None,
                f_rho1: f64::NAN,
            },
            case: CaseLabel::Case1,
        };
        map.landmarks = map.compute_landmarks()?;
        map.case = map.classify(DEFAULT_TIE_TOL);
        Ok(map)
    }

    pub fn landmarks(&self) -> &Landmarks {
        &self.landmarks
    }

    /// Case label computed at validation with [`DEFAULT_TIE_TOL`].
    pub fn case(&self) -> CaseLabel {
        self.case
    }

    pub fn f0_value(&self, x: f64) -> f64 {
        // Closed form keeps f0(ρ) = 0 and f0(0) = ρ1 exact.
        self.alpha * (x - self.rho) / (self.gamma * x + self.delta)
    }

    pub fn f1_value(&self, x: f64) -> f64 {
        (x - self.rho) / (1.0 - self.rho)
    }

    /// Evaluates the map without domain checks; the result is clamped to `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let y = if x <= self.rho { self.f0_value(x) } else { self.f1_value(x) };
        y.clamp(0.0, 1.0)
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { x });
        }
        Ok(self.eval(x))
    }

    pub fn iterate(&self, x: f64, n: usize) -> f64 {
        (0..n).fold(x, |y, _| self.eval(y))
    }

    /// Branch image: `[0, ρ1]` for branch 0 and `[0, 1]` for branch 1.
    pub fn branch_image(&self, branch: u8) -> (f64, f64) {
        if branch == 0 {
            (0.0, self.rho1)
        } else {
            (0.0, 1.0)
        }
    }

    /// Preimage of `y` under one branch. `branch_inverse(1, 0)` returns the limit endpoint ρ.
    pub fn branch_inverse(&self, branch: u8, y: f64) -> Result<f64> {
        let (lo, hi) = self.branch_image(branch);
        if !(y >= lo - IMAGE_SLACK && y <= hi + IMAGE_SLACK) {
            return Err(Error::Image { branch, y, step: None });
        }
        let y = y.clamp(lo, hi);
        Ok(if branch == 0 {
            let x = (self.alpha * self.rho + y * self.delta) / (self.alpha - y * self.gamma);
            x.clamp(0.0, self.rho)
        } else {
            (self.rho + y * (1.0 - self.rho)).clamp(self.rho, 1.0)
        })
    }

    fn compute_landmarks(&self) -> Result<Landmarks> {
        let candidates: Vec<f64> =
            self.f0.fixed_points().roots().iter().copied().filter(|&r| r >= -1e-12 && r < self.rho).collect();
        let omega0 = match candidates.as_slice() {
            [r] => r.max(0.0),
            [] => return Err(Error::Landmark("no fixed point of f0 in [0, rho)".into())),
            _ => return Err(Error::Landmark("both fixed points of f0 lie in [0, rho)".into())),
        };
        let omega0_multiplier = self.f0.derivative_at(omega0)?;
        let f_rho1 = self.eval(self.rho1);
        let (mut w1, mut w2, mut cycle_multiplier) = (None, None, None);
        if self.rho1 > self.rho {
            let square = self.f0.compose(&self.f1)?;
            let found = square
                .fixed_points()
                .roots()
                .iter()
                .copied()
                .find(|&r| r >= self.rho - 1e-12 && r <= self.rho1 + 1e-12 && self.f1_value(r) <= self.rho + 1e-12);
            if let Some(r) = found {
                let r = r.clamp(self.rho, self.rho1);
                w2 = Some(r);
                w1 = Some(self.f1_value(r).clamp(0.0, self.rho));
                cycle_multiplier = Some(square.derivative_at(r)?);
            }
        }
        Ok(Landmarks { rho1: self.rho1, omega0, omega0_multiplier, w1, w2, cycle_multiplier, f_rho1 })
    }

    pub fn classify(&self, tie_tol: f64) -> CaseLabel {
        let gap = self.rho - self.rho1;
        if gap > tie_tol {
            return CaseLabel::Case1;
        }
        if gap.abs() <= tie_tol {
            return CaseLabel::Case2;
        }
        let Some(lambda) = self.landmarks.cycle_multiplier else {
            return CaseLabel::OutsideF2n(OutsideReason::NoTwoCycle);
        };
        if lambda.abs() < 1.0 - tie_tol {
            return CaseLabel::Case3a;
        }
        let square = match self.f0.compose(&self.f1) {
            Ok(m) => m,
            Err(_) => return CaseLabel::OutsideF2n(OutsideReason::NoTwoCycle),
        };
        if square.is_involution(tie_tol) {
            CaseLabel::Case3b
        } else if lambda.abs() <= 1.0 + tie_tol {
            CaseLabel::OutsideF2n(OutsideReason::NeutralCycle)
        } else {
            CaseLabel::OutsideF2n(OutsideReason::RepellingCycle)
        }
    }

    /// Least period in `{1, 2, 4, …, p_max}` of a point already near its limit set.
    fn least_period(&self, y: f64, p_max: u32, tol: f64) -> Option<u32> {
        let mut z = y;
        let mut done = 0u32;
        let mut p = 1u32;
        while p <= p_max {
            while done < p {
                z = self.eval(z);
                done += 1;
            }
            if (z - y).abs() <= tol {
                return Some(p);
            }
            p *= 2;
        }
        None
    }

    /// Keeps iterating until the least period of the orbit point stops changing.
    ///
    /// An orbit creeping toward a weakly attracting fixed point can pass the
    /// period-2 test long before the period-1 test, so a period `p > 1` is
    /// accepted only once `|f^{p/2}(y) − y|` has stopped shrinking.
    fn settled_period(&self, mut y: f64, p_max: u32, tol: f64) -> (f64, Option<u32>) {
        let half_gap = |y: f64, p: u32| (self.iterate(y, (p / 2) as usize) - y).abs();
        let mut prev = self.least_period(y, p_max, tol);
        for _ in 0..CENSUS_MAX_ROUNDS {
            let gap = prev.filter(|&p| p > 1).map(|p| half_gap(y, p));
            if prev == Some(1) {
                break;
            }
            let z = self.iterate(y, CENSUS_BURN_IN);
            let next = self.least_period(z, p_max, tol);
            let settled = match (prev, next, gap) {
                (Some(a), Some(b), Some(g)) if a == b => half_gap(z, b) >= 0.5 * g,
                _ => false,
            };
            y = z;
            prev = next;
            if settled {
                break;
            }
        }
        (y, prev)
    }

    /// Brute-force period census over a uniform grid.
    pub fn period_census(&self, grid_size: usize, p_max: u32, tol: f64) -> PeriodCensus {
        let grid_size = grid_size.max(2);
        let samples: Vec<(f64, Option<u32>)> = (0..grid_size)
            .into_par_iter()
            .map(|i| {
                let x = i as f64 / (grid_size - 1) as f64;
                self.settled_period(self.iterate(x, CENSUS_BURN_IN), p_max, tol)
            })
            .collect();

        let mut detected_periods = BTreeSet::new();
        let mut unresolved = 0;
        for &(_, p) in &samples {
            match p {
                Some(p) => {
                    detected_periods.insert(p);
                }
                None => unresolved += 1,
            }
        }

        let periodic_intervals = self.periodic_intervals(&samples);
        // Isolated low-period orbits inside an interval of higher period are
        // invisible to the grid; locate them as sign changes of f^{p/2}(y) − y.
        for iv in &periodic_intervals {
            let half = (iv.period / 2) as usize;
            let g = |y: f64| self.iterate(y, half) - y;
            let mut ys: Vec<f64> = samples
                .iter()
                .filter(|(y, p)| *p == Some(iv.period) && *y >= iv.lo && *y <= iv.hi)
                .map(|(y, _)| *y)
                .collect();
            ys.sort_by(f64::total_cmp);
            ys.dedup();
            for pair in ys.windows(2) {
                let (mut a, mut b) = (pair[0], pair[1]);
                let (ga, gb) = (g(a), g(b));
                if ga == 0.0 || ga.signum() == gb.signum() {
                    continue;
                }
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if g(m).signum() == ga.signum() {
                        a = m
                    } else {
                        b = m
                    }
                }
                if let Some(q) = self.least_period(0.5 * (a + b), p_max, tol) {
                    detected_periods.insert(q);
                }
            }
        }

        let max_p = detected_periods.iter().next_back().copied();
        let stabilization_n = match max_p {
            Some(m) if unresolved == 0 && m < p_max => Some(m.trailing_zeros()),
            _ => None,
        };
        PeriodCensus { detected_periods, stabilization_n, periodic_intervals, unresolved }
    }

    fn periodic_intervals(&self, samples: &[(f64, Option<u32>)]) -> Vec<PeriodicInterval> {
        let periods: BTreeSet<u32> = samples.iter().filter_map(|s| s.1).filter(|&p| p >= 2).collect();
        let mut out = Vec::new();
        for period in periods {
            let mut ys: Vec<f64> = samples.iter().filter(|s| s.1 == Some(period)).map(|s| s.0).collect();
            ys.sort_by(f64::total_cmp);
            let mut start = 0;
            for i in 1..=ys.len() {
                if i == ys.len() || ys[i] - ys[i - 1] > CLUSTER_GAP {
                    let (lo, hi) = (ys[start], ys[i - 1]);
                    if hi - lo >= MIN_INTERVAL_WIDTH {
                        out.push(PeriodicInterval { lo, hi, period });
                    }
                    start = i;
                }
            }
        }
        out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out
    }

    /// `d_0 = ρ1` and `d_n = |f^n(ρ) − f^n(ρ1)|` for `1 ≤ n ≤ k`.
    pub fn d_sequence(&self, k: usize) -> Result<Vec<f64>> {
        if self.rho1 - self.rho <= DEFAULT_TIE_TOL {
            return Err(Error::WrongCase { required: "rho < rho1 (case 3)", found: self.case });
        }
        let mut out = Vec::with_capacity(k + 1);
        out.push(self.rho1);
        let (mut a, mut b) = (self.rho, self.rho1);
        for _ in 0..k {
            a = self.eval(a);
            b = self.eval(b);
            out.push((a - b).abs());
        }
        Ok(out)
    }

    /// Left end of the embedded ray: `−Σ_{n=0}^{k} |f^{n+1}(0) − f^n(0)|` plus a
    /// bound on the omitted tail. Case 2 returns the −∞ sentinel.
    pub fn tail_endpoint_a(&self, k: usize) -> Result<TailEndpoint> {
        match self.case {
            CaseLabel::Case2 => return Ok(TailEndpoint::NegInfinity),
            CaseLabel::Case1 => {}
            found => return Err(Error::WrongCase { required: "case 1", found }),
        }
        let mut x = 0.0;
        let mut sum = 0.0;
        let mut last = 0.0;
        for _ in 0..=k {
            let y = self.eval(x);
            last = (y - x).abs();
            sum += last;
            x = y;
        }
        // Later steps stay between the last two orbit points, where |f0'| is
        // largest at one of the ends.
        let prev = if k == 0 { 0.0 } else { self.iterate(0.0, k) };
        let q = [prev, x]
            .iter()
            .map(|&t| self.f0.derivative_at(t).map(f64::abs).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let remainder_bound = if q < 1.0 { last * q / (1.0 - q) } else { f64::INFINITY };
        Ok(TailEndpoint::Finite { value: -sum, remainder_bound })
    }

    pub fn conjugator(&self) -> Result<Conjugator> {
        if self.case != CaseLabel::Case2 {
            return Err(Error::WrongCase { required: "case 2", found: self.case });
        }
        let s = (1.0 - self.gamma * self.rho / self.alpha).sqrt();
        Ok(Conjugator { map: *self, c: (s - 1.0) / self.rho, d: 1.0 })
    }
}

/// The homeomorphism `h` bringing a case-2 map to the normal form `ρ − x ⊕ (x − ρ)/(1 − ρ)`.
///
/// On `[0, ρ]` it is `(cρ + d)x/(cx + d)` with `c = (√(1 − γρ/α) − 1)/ρ`, `d = 1`;
/// on `(ρ, 1]` it is determined by `h ∘ f1 = f1 ∘ h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugator {
    map: UnimodalMap,
    pub c: f64,
    pub d: f64,
}

impl Conjugator {
    const PULLBACK_DEPTH: usize = 2000;

    fn h_left(&self, x: f64) -> f64 {
        (self.c * self.map.rho + self.d) * x / (self.c * x + self.d)
    }

    fn h_left_inv(&self, y: f64) -> f64 {
        self.d * y / (self.c * (self.map.rho - y) + self.d)
    }

    /// Pushes `x` forward through the right branch until it reaches `[0, ρ]`,
    /// applies `left` there, and pulls the result back along the same branch.
    fn pullback(&self, x: f64, left: impl Fn(f64) -> f64) -> f64 {
        let rho = self.map.rho;
        let mut y = x;
        let mut steps = 0;
        while y > rho && steps < Self::PULLBACK_DEPTH {
            y = self.map.f1_value(y);
            steps += 1;
        }
        let mut r = if y > rho { y } else { left(y) };
        for _ in 0..steps {
            r = rho + r * (1.0 - rho);
        }
        r
    }

    pub fn h(&self, x: f64) -> f64 {
        self.pullback(x, |y| self.h_left(y))
    }

    pub fn h_inv(&self, y: f64) -> f64 {
        self.pullback(y, |z| self.h_left_inv(z))
    }

    /// `h ∘ f ∘ h⁻¹`.
    pub fn g(&self, x: f64) -> f64 {
        self.h(self.map.eval(self.h_inv(x)))
    }

    pub fn normal_form(&self, x: f64) -> f64 {
        let rho = self.map.rho;
        if x <= rho {
            rho - x
        } else {
            (x - rho) / (1.0 - rho)
        }
    }
}

/// Parses a `key=value` preset with keys `rho`, `delta`, `gamma`, `alpha`.
pub fn parse_preset(text: &str) -> Result<(f64, f64, f64, f64)> {
    let (mut rho, mut delta, mut gamma, mut alpha) = (None, None, None, None);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad number {:?}", lineno + 1, value.trim())))?;
        let slot = match key.trim() {
            "rho" => &mut rho,
            "delta" => &mut delta,
            "gamma" => &mut gamma,
            "alpha" => &mut alpha,
            other => return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1))),
        };
        *slot = Some(value);
    }
    let get = |v: Option<f64>, name: &str| v.ok_or_else(|| Error::Parse(format!("missing {name}")));
    Ok((get(rho, "rho")?, get(delta, "delta")?, get(gamma, "gamma")?, get(alpha, "alpha")?))
}

/// The four reference instances.
pub mod presets {
    use super::UnimodalMap;

    pub fn case1() -> UnimodalMap {
        UnimodalMap::new(0.5, 2.0, 0.0, -1.0).expect("valid preset")
    }

    pub fn case2() -> UnimodalMap {
        UnimodalMap::new(0.5, 1.0, 0.0, -1.0).expect("valid preset")
    }

    pub fn case3a() -> UnimodalMap {
        UnimodalMap::new(0.3, 1.0, -2.0, -1.2).expect("valid preset")
    }

    pub fn case3b() -> UnimodalMap {
        UnimodalMap::new(0.3, 1.0, -2.0, -1.3).expect("valid preset")
    }

    pub fn all() -> [UnimodalMap; 4] {
        [case1(), case2(), case3a(), case3b()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert_eq!(presets::case2().rho1, 0.5);
        assert_eq!(presets::case1().rho1, 0.25);
        let err = UnimodalMap::new(0.5, 1.0, 0.0, 1.0).unwrap_err();
        assert_eq!(err.to_string(), "α<0 violated");
        let err = UnimodalMap::new(0.3, 1.0, 0.0, -4.0).unwrap_err();
        assert_eq!(err.to_string(), "α>−δ/ρ violated");
        let err = UnimodalMap::new(1.5, -1.0, 0.0, 0.0).unwrap_err();
        assert_eq!(err.to_string(), "0<ρ<1 violated; δ>0 violated; α<0 violated");
    }

    #[test]
    fn apply_examples() {
        assert_eq!(presets::case2().apply(0.75).unwrap(), 0.5);
        assert!((presets::case3b().apply(0.0).unwrap() - 0.39).abs() < 1e-15);
        for m in presets::all() {
            assert_eq!(m.apply(m.rho).unwrap(), 0.0);
            assert_eq!(m.apply(1.0).unwrap(), 1.0);
        }
        assert!(matches!(presets::case1().apply(1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn branch_inverse_examples() {
        let m = presets::case2();
        assert!((m.branch_inverse(0, 0.2).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(m.branch_inverse(1, 0.0).unwrap(), 0.5);
        assert!(matches!(presets::case1().branch_inverse(0, 0.3), Err(Error::Image { branch: 0, .. })));
    }

    #[test]
    fn landmark_examples() {
        let l = *presets::case1().landmarks();
        assert!((l.omega0 - 1.0 / 6.0).abs() < 1e-15);
        assert!((l.omega0_multiplier + 0.5).abs() < 1e-15);
        assert!(l.w2.is_none());

        let l = *presets::case3a().landmarks();
        assert!((l.omega0 - 0.2).abs() < 1e-14);
        assert!((l.omega0_multiplier + 4.0 / 3.0).abs() < 1e-12);
        let w2 = l.w2.unwrap();
        // Root of 2x² − 2.5x + 0.612 = 0 inside [ρ, ρ1].
        let oracle = (2.5 - (2.5f64 * 2.5 - 8.0 * 0.612).sqrt()) / 4.0;
        assert!((w2 - oracle).abs() < 1e-12);
        assert!((w2 - 0.3341).abs() < 1e-4);
        assert!((l.cycle_multiplier.unwrap() + 0.842).abs() < 1e-3);

        let m = presets::case3a();
        for start in [w2 - 1e-3, w2 + 1e-3] {
            assert!((m.iterate(start, 400) - w2).abs() < 1e-12);
        }

        let l = *presets::case2().landmarks();
        assert!((l.omega0 - 0.25).abs() < 1e-15);
        assert!((l.omega0_multiplier + 1.0).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(presets::case1().classify(DEFAULT_TIE_TOL), CaseLabel::Case1);
        assert_eq!(presets::case2().classify(DEFAULT_TIE_TOL), CaseLabel::Case2);
        assert_eq!(presets::case3a().classify(DEFAULT_TIE_TOL), CaseLabel::Case3a);
        assert_eq!(presets::case3b().classify(DEFAULT_TIE_TOL), CaseLabel::Case3b);
        assert_eq!(CaseLabel::Case3b.n(), Some(2));
        assert_eq!(CaseLabel::Case1.n(), Some(0));
        assert!(UnimodalMap::new(0.3, 1.0, 0.0, -2.0).is_ok());
        assert!(UnimodalMap::new(0.3, 1.0, 0.0, -4.0).is_err());
    }

    #[test]
    fn census_examples() {
        let c = presets::case1().period_census(2048, 8, 1e-6);
        assert_eq!(c.detected_periods, BTreeSet::from([1]));
        assert_eq!(c.stabilization_n, Some(0));

        let c = presets::case2().period_census(2048, 8, 1e-6);
        assert_eq!(c.detected_periods, BTreeSet::from([1, 2]));
        assert_eq!(c.periodic_intervals.len(), 1);
        let iv = &c.periodic_intervals[0];
        assert!(iv.lo < 0.01 && iv.hi > 0.49 && iv.hi <= 0.5 && iv.period == 2);

        let c = presets::case3b().period_census(2048, 8, 1e-6);
        assert_eq!(c.detected_periods, BTreeSet::from([1, 2, 4]));
        assert_eq!(c.periodic_intervals.len(), 2);
        assert!(c.periodic_intervals.iter().all(|iv| iv.period == 4));
        assert_eq!(c.stabilization_n, Some(2));
    }

    #[test]
    fn d_sequence_examples() {
        let d = presets::case3b().d_sequence(4).unwrap();
        assert!((d[0] - 0.39).abs() < 1e-15);
        assert!((d[1] - 9.0 / 70.0).abs() < 1e-12);
        assert!((d[2] - 0.09).abs() < 1e-12);
        assert!((d[3] - d[1]).abs() < 1e-12 && (d[4] - d[2]).abs() < 1e-12);

        let d = presets::case3a().d_sequence(7).unwrap();
        assert!(d[1] > d[3] && d[3] > d[5] && d[5] > d[7]);
        assert!(matches!(presets::case1().d_sequence(3), Err(Error::WrongCase { .. })));
    }

    #[test]
    fn tail_endpoint_examples() {
        let m = presets::case1();
        match m.tail_endpoint_a(50).unwrap() {
            TailEndpoint::Finite { value, remainder_bound } => {
                // Orbit of 0 under x ↦ 1/4 − x/2 has step lengths (1/4)(1/2)^n.
                assert!((value + 0.5).abs() < 1e-12);
                assert!(remainder_bound < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        match m.tail_endpoint_a(0).unwrap() {
            TailEndpoint::Finite { value, .. } => assert_eq!(value, -m.rho1),
            other => panic!("{other:?}"),
        }
        assert_eq!(presets::case2().tail_endpoint_a(10).unwrap(), TailEndpoint::NegInfinity);
        assert!(presets::case3a().tail_endpoint_a(10).is_err());
    }

    #[test]
    fn conjugator_examples() {
        let c = presets::case2().conjugator().unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((c.h(x) - x).abs() < 1e-15);
            assert!((c.g(x) - presets::case2().eval(x)).abs() < 1e-15);
        }
        let m = UnimodalMap::new(0.4, 0.8, 1.5, -0.8).unwrap();
        assert_eq!(m.case(), CaseLabel::Case2);
        let c = m.conjugator().unwrap();
        assert_eq!(c.h(0.0), 0.0);
        assert!((c.h(0.4) - 0.4).abs() < 1e-15);
        let worst = (0..1000).map(|i| i as f64 / 999.0).map(|x| (c.g(x) - c.normal_form(x)).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-10, "worst {worst}");
        assert!(presets::case1().conjugator().is_err());
    }

    #[test]
    fn preset_parsing() {
        let text = "# case 3a\nrho = 0.3\ndelta=1\ngamma=-2\nalpha=-1.2\n";
        assert_eq!(parse_preset(text).unwrap(), (0.3, 1.0, -2.0, -1.2));
        assert!(parse_preset("rho=0.3").is_err());
        assert!(parse_preset("beta=1").is_err());
    }
}
