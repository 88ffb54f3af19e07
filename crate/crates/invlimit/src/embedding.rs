//! Line coordinates for the inverse limit.
//!
//! Ray-set bricks (codes ending in `1^∞`) are laid out on the real line by
//! affine charts `±Φ + offset`; bricks converging to `ω0` are laid out the
//! same way on an arc sheet. Tables of these charts are built once per map
//! and every coordinate query goes through them.

use std::fmt;
use std::str::FromStr;

use crate::codes::{cluster_index, enumerate_types, Family, Tail, TypeCode};
use crate::error::{Error, Result};
use crate::limit_space::{brick_interval, decode_point, shift, BrickInterval, LimitPoint, DEFAULT_DEPTH};
use crate::map_family::{CaseLabel, TailEndpoint, UnimodalMap};

/// Default number of bricks in the line and arc tables.
pub const DEFAULT_TABLE_BRICKS: usize = 40;
/// Iteration budget for brick intervals built into the tables.
const BRICK_DEPTH: usize = 4096;
/// Distance below which a coordinate counts as lying on a table interval.
const LOOKUP_TOL: f64 = 1e-12;
/// Pieces returned by [`Embedding::neighborhood_base`] at most.
pub const NEIGHBORHOOD_PIECES: usize = 16;
/// Terms of the case-1 endpoint series used for the line's lower end.
const ENDPOINT_TERMS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sheet {
    Line,
    ArcInf,
    ArcMinusInf,
    ArcPlusInf,
}

impl Sheet {
    pub fn name(self) -> &'static str {
        match self {
            Sheet::Line => "line",
            Sheet::ArcInf => "arc_inf",
            Sheet::ArcMinusInf => "arc_minus_inf",
            Sheet::ArcPlusInf => "arc_plus_inf",
        }
    }
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sheet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "line" => Ok(Sheet::Line),
            "arc_inf" | "arc" => Ok(Sheet::ArcInf),
            "arc_minus_inf" => Ok(Sheet::ArcMinusInf),
            "arc_plus_inf" => Ok(Sheet::ArcPlusInf),
            other => Err(Error::Parse(format!("unknown sheet {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedCoord {
    pub sheet: Sheet,
    pub value: f64,
}

impl ExtendedCoord {
    pub fn line(value: f64) -> Self {
        ExtendedCoord { sheet: Sheet::Line, value }
    }

    pub fn on(sheet: Sheet, value: f64) -> Self {
        ExtendedCoord { sheet, value }
    }
}

impl fmt::Display for ExtendedCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.value, self.sheet)
    }
}

/// One affine chart `sign·Φ + offset` on a brick.
#[derive(Debug, Clone, PartialEq)]
pub struct BrickEntry {
    pub code: TypeCode,
    pub phi: BrickInterval,
    pub sign: f64,
    pub offset: f64,
    /// `j` such that the brick has length `d_j` (case 3), or the `T_n` index (cases 1–2).
    pub length_index: usize,
}

impl BrickEntry {
    pub fn value(&self, phi: f64) -> f64 {
        self.sign * phi + self.offset
    }

    pub fn phi_of(&self, y: f64) -> f64 {
        self.sign * (y - self.offset)
    }

    /// The chart image of the brick, closure flags included.
    pub fn image(&self) -> BrickInterval {
        let p = self.phi;
        if self.sign > 0.0 {
            BrickInterval { lo: p.lo + self.offset, hi: p.hi + self.offset, ..p }
        } else {
            BrickInterval {
                lo: -p.hi + self.offset,
                hi: -p.lo + self.offset,
                lo_closed: p.hi_closed,
                hi_closed: p.lo_closed,
                converged: p.converged,
            }
        }
    }

    /// Distance from `y` to the image, and whether the image contains `y` itself.
    fn locate(&self, y: f64) -> (f64, bool) {
        let im = self.image();
        let dist = if y < im.lo {
            im.lo - y
        } else if y > im.hi {
            y - im.hi
        } else {
            0.0
        };
        (dist, im.contains(y))
    }
}

fn sign_of(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `2 Σ_{k=1}^{n−1} (−1)^k f^k(0)`.
pub fn ray_offset(map: &UnimodalMap, n: usize) -> f64 {
    let mut x = 0.0;
    let mut s = 0.0;
    for k in 1..n {
        x = map.eval(x);
        s += sign_of(k) * x;
    }
    2.0 * s
}

/// `2 Σ_{k=i}^{n−1} (−1)^k f^{2k−i}(ρ1)`.
pub fn arc_offset(map: &UnimodalMap, i: u8, n: usize) -> f64 {
    let i = i as usize;
    let mut s = 0.0;
    for k in i..n {
        s += sign_of(k) * map.iterate(map.rho1, 2 * k - i);
    }
    2.0 * s
}

/// One interval of a neighborhood base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodPiece {
    /// Length of the code prefix that separates the piece's brick from the center's.
    pub n: usize,
    pub sheet: Sheet,
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodBase {
    pub center: ExtendedCoord,
    pub arc_piece: Option<(f64, f64)>,
    pub line_pieces: Vec<NeighborhoodPiece>,
}

impl NeighborhoodBase {
    /// Whether the pieces on each sheet are pairwise disjoint.
    pub fn pieces_disjoint(&self) -> bool {
        let mut all: Vec<(Sheet, f64, f64)> = self.line_pieces.iter().map(|p| (p.sheet, p.lo, p.hi)).collect();
        if let Some((lo, hi)) = self.arc_piece {
            all.push((self.center.sheet, lo, hi));
        }
        all.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        all.windows(2).all(|w| w[0].0 != w[1].0 || w[0].2 < w[1].1)
    }

    /// Half the smallest distance between piece centers on a common sheet;
    /// pieces of any smaller radius are pairwise disjoint.
    pub fn disjoint_radius(&self) -> f64 {
        let mut all: Vec<(Sheet, f64)> = self.line_pieces.iter().map(|p| (p.sheet, p.center)).collect();
        if self.arc_piece.is_some() {
            all.push((self.center.sheet, self.center.value));
        }
        all.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        all.windows(2).filter(|w| w[0].0 == w[1].0).map(|w| 0.5 * (w[1].1 - w[0].1)).fold(f64::INFINITY, f64::min)
    }
}

/// Brick tables and coordinate conversions for one map.
#[derive(Debug, Clone)]
pub struct Embedding {
    map: UnimodalMap,
    line: Vec<BrickEntry>,
    arc: Vec<BrickEntry>,
    /// Case 1: the line's lower end, image of the fixed thread at `ω0`.
    line_end: Option<f64>,
    /// Case 3a: the arc ends `a_∞ < b_∞`.
    arc_ends: Option<(f64, f64)>,
    /// Case 3: `d_0, d_1, …` long enough for the tables.
    d: Vec<f64>,
}

impl Embedding {
    pub fn new(map: &UnimodalMap) -> Result<Self> {
        Self::with_bricks(map, DEFAULT_TABLE_BRICKS)
    }

    pub fn with_bricks(map: &UnimodalMap, bricks: usize) -> Result<Self> {
        let case = map.case();
        if let CaseLabel::OutsideF2n(_) = case {
            return Err(Error::WrongCase { required: "case 1, 2 or 3", found: case });
        }
        let bricks = bricks.max(2);
        let mut emb = Embedding {
            map: *map,
            line: Vec::with_capacity(bricks),
            arc: Vec::new(),
            line_end: None,
            arc_ends: None,
            d: Vec::new(),
        };
        match case {
            CaseLabel::Case1 | CaseLabel::Case2 => {
                for (n, code) in enumerate_types(case, bricks).into_iter().enumerate() {
                    let phi = brick_interval(map, &code, BRICK_DEPTH)?;
                    emb.line.push(BrickEntry {
                        code,
                        phi,
                        sign: sign_of(n),
                        offset: ray_offset(map, n),
                        length_index: n,
                    });
                }
                if case == CaseLabel::Case1 {
                    if let TailEndpoint::Finite { value, .. } = map.tail_endpoint_a(ENDPOINT_TERMS)? {
                        emb.line_end = Some(value);
                    }
                }
                let code = TypeCode::t_inf();
                let phi = brick_interval(map, &code, BRICK_DEPTH)?;
                if case == CaseLabel::Case2 {
                    emb.arc.push(BrickEntry { code, phi, sign: 1.0, offset: 0.0, length_index: 0 });
                }
            }
            _ => emb.build_case3(bricks)?,
        }
        Ok(emb)
    }

    fn build_case3(&mut self, bricks: usize) -> Result<()> {
        let map = self.map;
        let case = map.case();
        let codes = enumerate_types(case, bricks);
        // Partial sums S_j = Σ_{k=1}^{j} |Φ(A_k)|.
        let mut partial = vec![0.0];
        for (m, code) in codes.into_iter().enumerate() {
            let phi = brick_interval(&map, &code, BRICK_DEPTH)?;
            if m >= 1 {
                let last = *partial.last().unwrap();
                partial.push(last + phi.width());
            }
            let sign = sign_of(m);
            let offset = -sign * phi.lo - partial[2 * (m / 2)];
            let length_index = match code.family() {
                Some(Family::Tnk { i, k, .. }) => 2 * k - i as usize,
                _ => 0,
            };
            self.line.push(BrickEntry { code, phi, sign, offset, length_index });
        }
        let arc_k = bricks;
        self.d = map.d_sequence(2 * arc_k + 2)?;
        let code = TypeCode::t_inf();
        let phi = brick_interval(&map, &code, BRICK_DEPTH)?;
        self.arc.push(BrickEntry { code, phi, sign: 1.0, offset: 0.0, length_index: 0 });
        for k in 1..=arc_k {
            for i in [1u8, 0] {
                let code = TypeCode::t_k(i, k);
                let phi = brick_interval(&map, &code, BRICK_DEPTH)?;
                self.arc.push(BrickEntry {
                    code,
                    phi,
                    sign: sign_of(k),
                    offset: arc_offset(&map, i, k),
                    length_index: 2 * k - i as usize,
                });
            }
        }
        if case == CaseLabel::Case3a {
            self.arc_ends = Some(arc_ends_3a(&map));
        }
        Ok(())
    }

    pub fn map(&self) -> &UnimodalMap {
        &self.map
    }

    /// Ray-set bricks in line order.
    pub fn line_table(&self) -> &[BrickEntry] {
        &self.line
    }

    /// Arc bricks: `T_∞`, then `T^1_k, T^0_k` for `k = 1, 2, …` (case 3), or `T_∞` alone (case 2).
    pub fn arc_table(&self) -> &[BrickEntry] {
        &self.arc
    }

    /// `d_0, d_1, …` as used by the case-3 tables.
    pub fn d_values(&self) -> &[f64] {
        &self.d
    }

    /// Case 1: the finite lower end `a` of the line.
    pub fn line_end(&self) -> Option<f64> {
        self.line_end
    }

    /// Case 3a: `(a_∞, b_∞)`.
    pub fn arc_ends(&self) -> Option<(f64, f64)> {
        self.arc_ends
    }

    /// The part of the line covered by the table, `[lo, 1]`.
    pub fn covered_line(&self) -> (f64, f64) {
        let lo = self.line.iter().map(|e| e.image().lo).fold(f64::INFINITY, f64::min);
        (self.line_end.unwrap_or(lo), 1.0)
    }

    fn require_line_code(&self, t: &TypeCode) -> Result<&BrickEntry> {
        let case = self.map.case();
        let membership = || Error::Membership { code: t.to_string(), set: "the line table" };
        if !t.in_ray_set() {
            return Err(Error::Membership { code: t.to_string(), set: "the ray set" });
        }
        let idx = cluster_index(case, t).ok_or_else(membership)?;
        self.line.get(idx).ok_or_else(membership)
    }

    /// `Ψ` in cases 1 and 2: `(−1)^n Φ + 2Σ_{k=1}^{n−1} (−1)^k f^k(0)` on `T_n`.
    pub fn psi_case12(&self, p: &LimitPoint) -> Result<f64> {
        let case = self.map.case();
        if !matches!(case, CaseLabel::Case1 | CaseLabel::Case2) {
            return Err(Error::WrongCase { required: "case 1 or 2", found: case });
        }
        match p.code().family() {
            Some(Family::T(n)) if p.code().in_ray_set() => Ok(match self.line.get(n) {
                Some(e) => e.value(p.x0()),
                None => sign_of(n) * p.x0() + ray_offset(&self.map, n),
            }),
            _ => Err(Error::Membership { code: p.code().to_string(), set: "the ray set" }),
        }
    }

    /// `Ψ` in case 3 via the cluster table.
    pub fn psi_case3(&self, p: &LimitPoint) -> Result<f64> {
        let case = self.map.case();
        if !case.is_case3() {
            return Err(Error::WrongCase { required: "case 3", found: case });
        }
        Ok(self.require_line_code(p.code())?.value(p.x0()))
    }

    /// `Ψ` for whichever case the map is in.
    pub fn psi(&self, p: &LimitPoint) -> Result<f64> {
        if self.map.case().is_case3() {
            self.psi_case3(p)
        } else {
            self.psi_case12(p)
        }
    }

    /// `Θ` on the set converging to `ω0` (case 3).
    pub fn theta(&self, p: &LimitPoint) -> Result<ExtendedCoord> {
        let case = self.map.case();
        if !case.is_case3() {
            return Err(Error::WrongCase { required: "case 3", found: case });
        }
        let x = p.x0();
        let membership = || Error::Membership { code: p.code().to_string(), set: "the set converging to ω0" };
        match p.code().family() {
            _ if p.code().tail() == Tail::AllOnes => Err(membership()),
            Some(Family::TInf) => Ok(ExtendedCoord::on(Sheet::ArcInf, x)),
            Some(Family::Tk { i, k }) => Ok(ExtendedCoord::on(Sheet::ArcInf, self.arc_value(i, k, x))),
            Some(Family::TkInf { i }) => Ok(match (self.arc_ends, i) {
                (Some((a, _)), 1) => ExtendedCoord::on(Sheet::ArcInf, a),
                (Some((_, b)), _) => ExtendedCoord::on(Sheet::ArcInf, b),
                (None, 1) => ExtendedCoord::on(Sheet::ArcMinusInf, x),
                (None, _) => ExtendedCoord::on(Sheet::ArcPlusInf, x),
            }),
            _ => Err(membership()),
        }
    }

    /// `Θ` on `T^i_k` at `Φ = x`, through the table when the brick is in it.
    fn arc_value(&self, i: u8, k: usize, x: f64) -> f64 {
        match self.arc.get(2 * k - i as usize) {
            Some(e) => e.value(x),
            None => sign_of(k) * x + arc_offset(&self.map, i, k),
        }
    }

    /// The coordinate of a point in the embedded model.
    pub fn encode(&self, p: &LimitPoint) -> Result<ExtendedCoord> {
        let case = self.map.case();
        if p.code().in_ray_set() {
            return Ok(ExtendedCoord::line(self.psi(p)?));
        }
        match case {
            CaseLabel::Case1 if *p.code() == TypeCode::t_inf() => {
                Ok(ExtendedCoord::line(self.line_end.expect("case 1 has a finite line end")))
            }
            CaseLabel::Case2 if *p.code() == TypeCode::t_inf() => Ok(ExtendedCoord::on(Sheet::ArcInf, p.x0())),
            CaseLabel::Case3a | CaseLabel::Case3b => self.theta(p),
            _ => Err(Error::Membership { code: p.code().to_string(), set: "the admissible codes" }),
        }
    }

    /// The table entry whose image holds `y`. At a shared endpoint the
    /// brick whose image is closed there wins, then the lower index.
    fn lookup(table: &[BrickEntry], y: f64) -> Option<&BrickEntry> {
        let mut best: Option<(f64, bool, &BrickEntry)> = None;
        for e in table {
            let (dist, inside) = e.locate(y);
            if dist > LOOKUP_TOL {
                continue;
            }
            let better = match best {
                None => true,
                Some((bd, bin, _)) => (inside && !bin) || (inside == bin && dist < bd),
            };
            if better {
                best = Some((dist, inside, e));
            }
        }
        best.map(|(_, _, e)| e)
    }

    fn decode_entry(&self, e: &BrickEntry, y: f64, depth: usize) -> Result<LimitPoint> {
        let phi = e.phi_of(y).clamp(e.phi.lo, e.phi.hi);
        decode_point(&self.map, phi, &e.code, depth)
    }

    /// Inverse of `Ψ` on the covered part of the line.
    pub fn decode_line(&self, y: f64, depth: usize) -> Result<LimitPoint> {
        let (lo, hi) = self.covered_line();
        if let Some(a) = self.line_end {
            if (y - a).abs() <= LOOKUP_TOL {
                return decode_point(&self.map, self.map.landmarks().omega0, &TypeCode::t_inf(), depth);
            }
        }
        let out = || Error::OutOfRange { value: y, lo, hi };
        if y.is_nan() || y > hi + LOOKUP_TOL {
            return Err(out());
        }
        let e = Self::lookup(&self.line, y).ok_or_else(out)?;
        self.decode_entry(e, y, depth)
    }

    /// The point with coordinate `c`.
    pub fn decode(&self, c: ExtendedCoord, depth: usize) -> Result<LimitPoint> {
        let case = self.map.case();
        let map = &self.map;
        let missing = || Error::WrongCase { required: sheet_requirement(c.sheet), found: case };
        match c.sheet {
            Sheet::Line => self.decode_line(c.value, depth),
            Sheet::ArcInf => {
                if case == CaseLabel::Case1 {
                    return Err(missing());
                }
                if let Some((a, b)) = self.arc_ends {
                    let l = map.landmarks();
                    if (c.value - a).abs() <= LOOKUP_TOL {
                        return decode_point(map, l.w1.expect("case 3a has w1"), &TypeCode::t_k_inf(1), depth);
                    }
                    if (c.value - b).abs() <= LOOKUP_TOL {
                        return decode_point(map, l.w2.expect("case 3a has w2"), &TypeCode::t_k_inf(0), depth);
                    }
                }
                let e = Self::lookup(&self.arc, c.value).ok_or_else(|| self.arc_out_of_range(c.value))?;
                self.decode_entry(e, c.value, depth)
            }
            Sheet::ArcMinusInf | Sheet::ArcPlusInf => {
                if case != CaseLabel::Case3b {
                    return Err(missing());
                }
                let (i, lo, hi) = if c.sheet == Sheet::ArcMinusInf {
                    (1, 0.0, map.landmarks().f_rho1)
                } else {
                    (0, map.rho, map.rho1)
                };
                if !(c.value >= lo - LOOKUP_TOL && c.value <= hi + LOOKUP_TOL) {
                    return Err(Error::OutOfRange { value: c.value, lo, hi });
                }
                decode_point(map, c.value.clamp(lo, hi), &TypeCode::t_k_inf(i), depth)
            }
        }
    }

    fn arc_out_of_range(&self, value: f64) -> Error {
        let lo = self.arc.iter().map(|e| e.image().lo).fold(f64::INFINITY, f64::min);
        let hi = self.arc.iter().map(|e| e.image().hi).fold(f64::NEG_INFINITY, f64::max);
        Error::OutOfRange { value, lo, hi }
    }

    /// The shift homeomorphism in model coordinates: decode, shift, encode.
    pub fn embedded_shift(&self, c: ExtendedCoord) -> Result<ExtendedCoord> {
        let p = self.decode(c, DEFAULT_DEPTH)?;
        self.encode(&shift(&self.map, &p))
    }

    /// Line values of the ray bricks accumulating on the arc point `(code, Φ = x)`,
    /// with the prefix length separating them from it.
    fn accumulating_line_values(&self, code: &TypeCode, x: f64, min_n: usize) -> Vec<(usize, f64)> {
        let case = self.map.case();
        let (pattern, i, k) = match code.family() {
            Some(Family::TInf) => (false, 0, 0),
            Some(Family::Tk { i, k }) => (true, i, k),
            _ => return Vec::new(),
        };
        let mut out = Vec::new();
        for n in (2 * k + 1).max(min_n)..usize::MAX {
            if out.len() == NEIGHBORHOOD_PIECES {
                break;
            }
            let t = if pattern { TypeCode::t_nk(i, n, k) } else { TypeCode::t_n(n) };
            let value = match case {
                CaseLabel::Case1 | CaseLabel::Case2 => sign_of(n) * x + ray_offset(&self.map, n),
                _ => match self.require_line_code(&t) {
                    Ok(e) => e.value(x),
                    Err(_) => break,
                },
            };
            out.push((n, value));
        }
        out
    }

    /// Pieces of a basic neighborhood of `c` of radius `eps` built from bricks beyond index `big_n`.
    pub fn neighborhood_base(&self, c: ExtendedCoord, big_n: usize, eps: f64) -> Result<NeighborhoodBase> {
        let piece =
            |n: usize, sheet: Sheet, v: f64| NeighborhoodPiece { n, sheet, center: v, lo: v - eps, hi: v + eps };
        if c.sheet == Sheet::Line {
            return Ok(NeighborhoodBase {
                center: c,
                arc_piece: None,
                line_pieces: vec![piece(0, Sheet::Line, c.value)],
            });
        }
        let p = self.decode(c, 8)?;
        let x = p.x0();
        let mut pieces = Vec::new();
        match p.code().family() {
            Some(Family::TkInf { i }) => {
                // Arc points of `T^i_n` with the same head accumulate here.
                let k_max = if self.arc.len() > 1 { (self.arc.len() - 1) / 2 } else { 0 };
                for n in (big_n + 1)..=k_max {
                    if pieces.len() == NEIGHBORHOOD_PIECES {
                        break;
                    }
                    pieces.push(piece(n, Sheet::ArcInf, self.arc_value(i, n, x)));
                }
            }
            _ => {
                for (n, v) in self.accumulating_line_values(p.code(), x, big_n + 1) {
                    pieces.push(piece(n, Sheet::Line, v));
                }
            }
        }
        Ok(NeighborhoodBase { center: c, arc_piece: Some((c.value - eps, c.value + eps)), line_pieces: pieces })
    }

    /// Number of model coordinates: `N + 1` for an `F_{2^N}` map.
    pub fn model_dimension(&self) -> usize {
        self.map.case().n().map_or(1, |n| n as usize + 1)
    }

    /// Compression of the line onto `(0, 1]`: `ρ1 / (ρ1 + 1 − ℓ)`, so folds
    /// of length `d0` sit at heights falling off like `1/k`.
    pub fn line_height(&self, ell: f64) -> f64 {
        let r = self.map.rho1;
        r / (r + 1.0 - ell)
    }

    /// The arc coordinate a line brick's chart follows: `T_n` follows `T_∞`,
    /// `T^{(i)}_{n,k}` follows `T^i_k`.
    fn shadow(&self, p: &LimitPoint) -> Option<(TypeCode, f64)> {
        let x = p.x0();
        match p.code().family()? {
            Family::T(_) => Some((TypeCode::t_inf(), x)),
            Family::Tnk { i, k, .. } => Some((TypeCode::t_k(i, k), self.arc_value(i, k, x))),
            _ => None,
        }
    }

    /// Arc coordinate normalized to `[−1, 1]` (cases 2 and 3a).
    fn arc_height(&self, theta: f64) -> f64 {
        let (lo, hi) = self.arc_ends.unwrap_or((0.0, self.map.rho));
        2.0 * (theta - lo) / (hi - lo) - 1.0
    }

    /// Case 3b: horizontal position along the middle arc.
    fn middle_arc_x(&self, theta: f64) -> f64 {
        let s = 8.0 * self.d[1].max(self.d[2]);
        0.5 + 0.5 * ((theta - 0.5 * self.map.rho1) / s).tanh()
    }

    /// Case 3b: vertical position of a point of the middle arc brick `code` with head `x`.
    fn middle_arc_y(&self, code: &TypeCode, x: f64) -> f64 {
        let (lo, len) = match code.family() {
            Some(Family::Tk { i: 1, .. }) => (0.0, self.d[1]),
            Some(Family::Tk { .. }) => (self.map.rho, self.d[2]),
            _ => (0.0, self.map.rho1),
        };
        2.0 * (x - lo) / len - 1.0
    }

    /// Rendering chart of the model in `ℝ^{N+1}`.
    ///
    /// One coordinate in case 1: the line rescaled onto `[0, 1]`. Two in cases 2
    /// and 3a: the compressed line position and the normalized arc coordinate of
    /// the brick's shadow, arcs at height 0. Three in case 3b: the middle arc
    /// spread horizontally, the outer arcs at `x = 0, 1`, the line lifted by its
    /// compressed position.
    pub fn model_coordinates(&self, c: ExtendedCoord) -> Result<Vec<f64>> {
        let case = self.map.case();
        match case {
            CaseLabel::Case1 => {
                let a = self.line_end.expect("case 1 has a finite line end");
                if c.sheet != Sheet::Line {
                    return Err(Error::WrongCase { required: sheet_requirement(c.sheet), found: case });
                }
                Ok(vec![(c.value - a) / (1.0 - a)])
            }
            CaseLabel::Case2 | CaseLabel::Case3a => match c.sheet {
                Sheet::Line => {
                    let p = self.decode_line(c.value, 1)?;
                    let (_, theta) = self.shadow(&p).expect("line codes have shadows");
                    Ok(vec![self.line_height(c.value), self.arc_height(theta)])
                }
                Sheet::ArcInf => {
                    self.decode(c, 1)?;
                    Ok(vec![0.0, self.arc_height(c.value)])
                }
                _ => Err(Error::WrongCase { required: sheet_requirement(c.sheet), found: case }),
            },
            CaseLabel::Case3b => {
                let d1 = self.d[1];
                let d2 = self.d[2];
                match c.sheet {
                    Sheet::ArcMinusInf => {
                        self.decode(c, 1)?;
                        Ok(vec![0.0, 2.0 * c.value / d1 - 1.0, 0.0])
                    }
                    Sheet::ArcPlusInf => {
                        self.decode(c, 1)?;
                        Ok(vec![1.0, 2.0 * (c.value - self.map.rho) / d2 - 1.0, 0.0])
                    }
                    Sheet::ArcInf => {
                        let p = self.decode(c, 1)?;
                        Ok(vec![self.middle_arc_x(c.value), self.middle_arc_y(p.code(), p.x0()), 0.0])
                    }
                    Sheet::Line => {
                        let p = self.decode_line(c.value, 1)?;
                        let (code, theta) = self.shadow(&p).expect("line codes have shadows");
                        Ok(vec![self.middle_arc_x(theta), self.middle_arc_y(&code, p.x0()), self.line_height(c.value)])
                    }
                }
            }
            CaseLabel::OutsideF2n(_) => unreachable!("rejected at construction"),
        }
    }
}

fn sheet_requirement(sheet: Sheet) -> &'static str {
    match sheet {
        Sheet::Line => "any case",
        Sheet::ArcInf => "case 2 or 3",
        Sheet::ArcMinusInf | Sheet::ArcPlusInf => "case 3b",
    }
}

/// `a_∞ = −Σ_{k≥1} d_{2k−1}` and `b_∞ = ρ1 + Σ_{k≥1} d_{2k}`.
fn arc_ends_3a(map: &UnimodalMap) -> (f64, f64) {
    let (mut lo, mut hi) = (map.rho, map.rho1);
    let (mut odd, mut even) = (0.0, 0.0);
    for n in 1..200_000 {
        lo = map.eval(lo);
        hi = map.eval(hi);
        let d = (lo - hi).abs();
        if n % 2 == 1 {
            odd += d
        } else {
            even += d
        }
        if d < 1e-18 {
            break;
        }
    }
    (-odd, map.rho1 + even)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_family::presets;

    fn emb(map: &UnimodalMap) -> Embedding {
        Embedding::new(map).unwrap()
    }

    #[test]
    fn case12_charts() {
        for m in [presets::case1(), presets::case2()] {
            let e = emb(&m);
            let p = decode_point(&m, 0.7, &TypeCode::t_n(0), 8).unwrap();
            assert_eq!(e.psi_case12(&p).unwrap(), 0.7);
            let p = decode_point(&m, 0.2, &TypeCode::t_n(1), 8).unwrap();
            assert_eq!(e.psi_case12(&p).unwrap(), -0.2);
        }
        let m = presets::case2();
        let e = emb(&m);
        for n in 0..12 {
            let p = decode_point(&m, 0.1, &TypeCode::t_n(n), 8).unwrap();
            let want = sign_of(n) * 0.1 - 2.0 * (n / 2) as f64 * m.rho;
            assert!((e.psi_case12(&p).unwrap() - want).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn case3_charts() {
        let m = presets::case3a();
        let e = emb(&m);
        let p = decode_point(&m, 0.1, &TypeCode::t_n(0), 8).unwrap();
        assert_eq!(e.psi_case3(&p).unwrap(), 0.1);
        let p = decode_point(&m, 0.1, &TypeCode::t_n(2), 8).unwrap();
        assert!((e.psi_case3(&p).unwrap() - (0.1 - 2.0 * m.rho1)).abs() < 1e-15);
        let table = e.line_table();
        for w in table.windows(2).take(21) {
            let (upper, lower) = (w[0].image(), w[1].image());
            assert!((upper.lo - lower.hi).abs() < 1e-10, "{} / {}", w[0].code, w[1].code);
            // Exactly one side owns the junction.
            assert!(upper.lo_closed != lower.hi_closed, "{} / {}", w[0].code, w[1].code);
        }
    }

    #[test]
    fn theta_examples() {
        let m = presets::case3a();
        let e = emb(&m);
        let p = decode_point(&m, 0.2, &TypeCode::t_inf(), 8).unwrap();
        assert_eq!(e.theta(&p).unwrap(), ExtendedCoord::on(Sheet::ArcInf, 0.2));
        let p = decode_point(&m, 0.03, &TypeCode::t_k(1, 1), 8).unwrap();
        assert_eq!(e.theta(&p).unwrap(), ExtendedCoord::on(Sheet::ArcInf, -0.03));
        let ray = decode_point(&m, 0.5, &TypeCode::t_n(0), 8).unwrap();
        assert!(matches!(e.theta(&ray), Err(Error::Membership { .. })));

        let m = presets::case3b();
        let e = emb(&m);
        let x = 0.5 * m.landmarks().f_rho1;
        let p = decode_point(&m, x, &TypeCode::t_k_inf(1), 8).unwrap();
        assert_eq!(e.theta(&p).unwrap(), ExtendedCoord::on(Sheet::ArcMinusInf, x));
    }

    #[test]
    fn arc_tables_tile() {
        for m in [presets::case3a(), presets::case3b()] {
            let e = emb(&m);
            let arc = e.arc_table();
            for i in [1usize, 0] {
                let mut prev = arc[0].image();
                for k in 1..20 {
                    let cur = arc[2 * k - i].image();
                    if i == 1 {
                        assert!((cur.hi - prev.lo).abs() < 1e-12, "T^1_{k}");
                    } else {
                        assert!((cur.lo - prev.hi).abs() < 1e-12, "T^0_{k}");
                    }
                    prev = cur;
                }
            }
        }
        let m = presets::case3a();
        let e = emb(&m);
        let (a, b) = e.arc_ends().unwrap();
        let lo = e.arc_table().iter().map(|x| x.image().lo).fold(f64::INFINITY, f64::min);
        let hi = e.arc_table().iter().map(|x| x.image().hi).fold(f64::NEG_INFINITY, f64::max);
        assert!(a < lo && lo - a < 0.05 && hi < b && b - hi < 0.05);
    }

    #[test]
    fn decode_line_examples() {
        for m in presets::all() {
            let e = emb(&m);
            let p = e.decode_line(1.0, 6).unwrap();
            assert!(p.thread().iter().all(|&x| x == 1.0));
        }
        let m = presets::case2();
        let p = emb(&m).decode_line(0.5, 6).unwrap();
        assert_eq!((p.code().clone(), p.x0()), (TypeCode::t_n(0), 0.5));
        let e = emb(&m);
        assert!(matches!(e.decode_line(-1e3, 6), Err(Error::OutOfRange { .. })));
        assert!(matches!(e.decode_line(1.5, 6), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn case2_shift_examples() {
        let m = presets::case2();
        let e = emb(&m);
        let s = e.embedded_shift(ExtendedCoord::line(0.75)).unwrap();
        assert_eq!(s.sheet, Sheet::Line);
        assert!((s.value - 0.5).abs() < 1e-12);
        let s = e.embedded_shift(ExtendedCoord::line(-0.3)).unwrap();
        assert!((s.value + 0.8).abs() < 1e-12);
        let s = e.embedded_shift(ExtendedCoord::on(Sheet::ArcInf, 0.1)).unwrap();
        assert_eq!(s.sheet, Sheet::ArcInf);
        assert!((s.value - 0.4).abs() < 1e-12);
    }

    #[test]
    fn case3b_outer_arcs_swap() {
        let m = presets::case3b();
        let e = emb(&m);
        let x = 0.02;
        let s = e.embedded_shift(ExtendedCoord::on(Sheet::ArcMinusInf, x)).unwrap();
        assert_eq!(s.sheet, Sheet::ArcPlusInf);
        assert!((s.value - m.eval(x)).abs() < 1e-12);
        let back = e.embedded_shift(s).unwrap();
        assert_eq!(back.sheet, Sheet::ArcMinusInf);
    }

    #[test]
    fn case3a_arc_ends_swap() {
        let m = presets::case3a();
        let e = emb(&m);
        let (a, b) = e.arc_ends().unwrap();
        let s = e.embedded_shift(ExtendedCoord::on(Sheet::ArcInf, a)).unwrap();
        assert_eq!(s, ExtendedCoord::on(Sheet::ArcInf, b));
        let s = e.embedded_shift(ExtendedCoord::on(Sheet::ArcInf, b)).unwrap();
        assert_eq!(s, ExtendedCoord::on(Sheet::ArcInf, a));
    }

    #[test]
    fn neighborhood_examples() {
        let m = presets::case2();
        let e = emb(&m);
        let nb = e.neighborhood_base(ExtendedCoord::on(Sheet::ArcInf, 0.0), 1, 0.01).unwrap();
        let centers: Vec<f64> = nb.line_pieces.iter().map(|p| p.center).collect();
        assert_eq!(nb.line_pieces[0].n, 2);
        for (j, c) in centers.iter().enumerate() {
            let n = j + 2;
            assert!((c + 2.0 * (n / 2) as f64 * m.rho).abs() < 1e-14);
        }

        let m = presets::case3b();
        let e = Embedding::with_bricks(&m, 200).unwrap();
        let d1 = m.landmarks().f_rho1;
        let x = 0.3 * d1;
        let nb = e.neighborhood_base(ExtendedCoord::on(Sheet::ArcMinusInf, x), 2, 0.001).unwrap();
        assert_eq!(nb.line_pieces.len(), NEIGHBORHOOD_PIECES);
        for p in &nb.line_pieces {
            let want = sign_of(p.n) * x - 2.0 * (p.n / 2) as f64 * d1;
            assert!((p.center - want).abs() < 1e-12, "n = {}", p.n);
        }
        assert!(nb.pieces_disjoint());
    }

    #[test]
    fn model_chart_examples() {
        let m = presets::case1();
        let e = emb(&m);
        assert_eq!(e.model_coordinates(ExtendedCoord::line(1.0)).unwrap(), vec![1.0]);
        let a = e.line_end().unwrap();
        assert_eq!(e.model_coordinates(ExtendedCoord::line(a)).unwrap(), vec![0.0]);

        let m = presets::case2();
        let e = emb(&m);
        for x in [0.0, 0.25, 0.5] {
            let v = e.model_coordinates(ExtendedCoord::on(Sheet::ArcInf, x)).unwrap();
            assert_eq!(v[0], 0.0);
            assert!((-1.0..=1.0).contains(&v[1]));
        }
    }
}
