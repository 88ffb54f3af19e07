//! Type codes: binary itineraries of inverse-branch choices, stored as a finite
//! prefix followed by one of four eventually periodic tails.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::limit_space::{decode_point, LimitPoint};
use crate::map_family::{CaseLabel, UnimodalMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    AllZeros,
    AllOnes,
    /// 1, 0, 1, 0, …
    Alt10,
    /// 0, 1, 0, 1, …
    Alt01,
}

impl Tail {
    pub fn at(self, j: usize) -> u8 {
        match self {
            Tail::AllZeros => 0,
            Tail::AllOnes => 1,
            Tail::Alt10 => j.is_multiple_of(2) as u8,
            Tail::Alt01 => (j % 2 == 1) as u8,
        }
    }

    /// The tail seen one step later.
    pub fn advance(self) -> Tail {
        match self {
            Tail::Alt10 => Tail::Alt01,
            Tail::Alt01 => Tail::Alt10,
            t => t,
        }
    }

    /// The tail with `b` absorbed at its front, if `b` continues the pattern backwards.
    fn absorb(self, b: u8) -> Option<Tail> {
        match (self, b) {
            (Tail::AllZeros, 0) | (Tail::AllOnes, 1) => Some(self),
            (Tail::Alt10, 0) => Some(Tail::Alt01),
            (Tail::Alt01, 1) => Some(Tail::Alt10),
            _ => None,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Tail::AllZeros => "0^∞",
            Tail::AllOnes => "1^∞",
            Tail::Alt10 => "(10)^∞",
            Tail::Alt01 => "(01)^∞",
        }
    }
}

/// A type sequence in canonical form (shortest prefix).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeCode {
    prefix: Vec<u8>,
    tail: Tail,
}

/// The named families of admissible codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `T_n = 0^n 1^∞`.
    T(usize),
    /// `T^{(i)}_{n,k}` with `k ≥ 1`: `(10)^k 0^{n−2k} 1^∞` for `i = 1`, `(01)^k 0^{n−2k} 1^∞` for `i = 0`.
    Tnk { i: u8, n: usize, k: usize },
    /// `T_∞ = 0^∞`.
    TInf,
    /// `T^i_k`: `(10)^k 0^∞` or `(01)^k 0^∞`, `k ≥ 1`.
    Tk { i: u8, k: usize },
    /// `T^1_∞ = (10)^∞`, `T^0_∞ = (01)^∞`.
    TkInf { i: u8 },
}

impl TypeCode {
    pub fn new(prefix: Vec<u8>, tail: Tail) -> Self {
        canonicalize(prefix, tail)
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn at(&self, n: usize) -> u8 {
        match self.prefix.get(n) {
            Some(&b) => b,
            None => self.tail.at(n - self.prefix.len()),
        }
    }

    pub fn prepend(&self, b: u8) -> TypeCode {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(b);
        prefix.extend_from_slice(&self.prefix);
        canonicalize(prefix, self.tail)
    }

    pub fn drop_first(&self) -> TypeCode {
        if self.prefix.is_empty() {
            TypeCode { prefix: Vec::new(), tail: self.tail.advance() }
        } else {
            canonicalize(self.prefix[1..].to_vec(), self.tail)
        }
    }

    pub fn t_n(n: usize) -> Self {
        canonicalize(vec![0; n], Tail::AllOnes)
    }

    pub fn t_inf() -> Self {
        TypeCode { prefix: Vec::new(), tail: Tail::AllZeros }
    }

    fn alternating(i: u8, k: usize) -> Vec<u8> {
        let pair = if i == 1 { [1, 0] } else { [0, 1] };
        pair.iter().copied().cycle().take(2 * k).collect()
    }

    /// `T^{(i)}_{n,k}`; requires `2k ≤ n`.
    pub fn t_nk(i: u8, n: usize, k: usize) -> Self {
        assert!(2 * k <= n, "T^({i})_{{{n},{k}}} needs 2k <= n");
        let mut prefix = Self::alternating(i, k);
        prefix.extend(std::iter::repeat_n(0, n - 2 * k));
        canonicalize(prefix, Tail::AllOnes)
    }

    /// `T^i_k`.
    pub fn t_k(i: u8, k: usize) -> Self {
        canonicalize(Self::alternating(i, k), Tail::AllZeros)
    }

    /// `T^i_∞`.
    pub fn t_k_inf(i: u8) -> Self {
        TypeCode { prefix: Vec::new(), tail: if i == 1 { Tail::Alt10 } else { Tail::Alt01 } }
    }

    pub fn from_family(f: Family) -> Self {
        match f {
            Family::T(n) => Self::t_n(n),
            Family::Tnk { i, n, k } => Self::t_nk(i, n, k),
            Family::TInf => Self::t_inf(),
            Family::Tk { i, k } => Self::t_k(i, k),
            Family::TkInf { i } => Self::t_k_inf(i),
        }
    }

    /// Identifies the named family, if any.
    pub fn family(&self) -> Option<Family> {
        let w = &self.prefix;
        match self.tail {
            Tail::AllOnes => {
                let (i, k) = leading_pairs(w);
                let rest = &w[2 * k..];
                if !rest.iter().all(|&b| b == 0) {
                    return None;
                }
                let n = w.len();
                if k == 0 {
                    Some(Family::T(n))
                } else if i == 0 && rest.is_empty() {
                    None
                } else {
                    Some(Family::Tnk { i, n, k })
                }
            }
            Tail::AllZeros => {
                if w.is_empty() {
                    return Some(Family::TInf);
                }
                // Canonical (10)^k 0^∞ drops its last 0.
                let (i, k) = leading_pairs(w);
                match (i, &w[2 * k..]) {
                    (1, [1]) => Some(Family::Tk { i: 1, k: k + 1 }),
                    (0, []) if k >= 1 => Some(Family::Tk { i: 0, k }),
                    _ => None,
                }
            }
            Tail::Alt10 if w.is_empty() => Some(Family::TkInf { i: 1 }),
            Tail::Alt01 if w.is_empty() => Some(Family::TkInf { i: 0 }),
            _ => None,
        }
    }

    /// Whether the code names a point set converging to the fixed point 1.
    pub fn in_ray_set(&self) -> bool {
        self.tail == Tail::AllOnes
    }
}

/// Counts the leading `(10)` or `(01)` pairs; returns the pattern bit and the count.
fn leading_pairs(w: &[u8]) -> (u8, usize) {
    let Some(&first) = w.first() else { return (0, 0) };
    let pair = if first == 1 { [1, 0] } else { [0, 1] };
    let k = w.chunks_exact(2).take_while(|c| *c == pair).count();
    (first, k)
}

pub fn canonicalize(mut prefix: Vec<u8>, mut tail: Tail) -> TypeCode {
    while let Some(&last) = prefix.last() {
        match tail.absorb(last) {
            Some(t) => {
                tail = t;
                prefix.pop();
            }
            None => break,
        }
    }
    TypeCode { prefix, tail }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::T(n) => write!(f, "T_{n}"),
            Family::Tnk { i, n, k } => write!(f, "T^({i})_{{{n},{k}}}"),
            Family::TInf => write!(f, "T_∞"),
            Family::Tk { i, k } => write!(f, "T^{i}_{k}"),
            Family::TkInf { i } => write!(f, "T^{i}_∞"),
        }
    }
}

impl fmt::Display for TypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            write!(f, "{b}")?;
        }
        write!(f, ".{}", self.tail.symbol())
    }
}

impl FromStr for TypeCode {
    type Err = Error;

    /// Accepts `prefix.tail` with tail `0^∞`, `1^∞`, `(10)^∞`, `(01)^∞`; `inf` may replace `∞`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s.trim().split_once('.').ok_or_else(|| Error::Parse(format!("code {s:?} lacks '.'")))?;
        let prefix = head
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad symbol {c:?} in code {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let tail = match tail.replace("inf", "∞").as_str() {
            "0^∞" => Tail::AllZeros,
            "1^∞" => Tail::AllOnes,
            "(10)^∞" => Tail::Alt10,
            "(01)^∞" => Tail::Alt01,
            other => return Err(Error::Parse(format!("unknown tail {other:?}"))),
        };
        Ok(canonicalize(prefix, tail))
    }
}

/// Admissibility of a code for a map in the given case.
pub fn is_admissible(case: CaseLabel, t: &TypeCode) -> bool {
    match case {
        CaseLabel::Case1 | CaseLabel::Case2 => {
            t.prefix.iter().all(|&b| b == 0)
                && (t.tail == Tail::AllOnes || (t.tail == Tail::AllZeros && t.prefix.is_empty()))
        }
        CaseLabel::Case3a | CaseLabel::Case3b => satisfies_case3_rules(t),
        CaseLabel::OutsideF2n(_) => false,
    }
}

fn satisfies_case3_rules(t: &TypeCode) -> bool {
    // Past the prefix the sequence has period at most 2, so a short window suffices.
    let horizon = t.prefix.len() + 6;
    let ones_from = |m: usize| t.tail == Tail::AllOnes && (m..t.prefix.len()).all(|j| t.at(j) == 1);
    for n in 0..horizon {
        let (a, b) = (t.at(n), t.at(n + 1));
        if a == 1 && b == 1 && !ones_from(n) {
            return false;
        }
        if a == 0 && b == 0 && t.at(n + 2) == 1 && !ones_from(n + 2) {
            return false;
        }
    }
    true
}

/// Position of a ray-set code in the cluster order used by [`enumerate_types`].
pub fn cluster_index(case: CaseLabel, t: &TypeCode) -> Option<usize> {
    let fam = t.family()?;
    match case {
        CaseLabel::Case1 | CaseLabel::Case2 => match fam {
            Family::T(n) => Some(n),
            _ => None,
        },
        CaseLabel::Case3a | CaseLabel::Case3b => match fam {
            Family::T(0) => Some(0),
            Family::T(1) => Some(1),
            Family::T(m) => {
                let c = m / 2;
                Some(if m % 2 == 0 { 2 * c * c } else { 2 * c * c + 2 * c + 1 })
            }
            Family::Tnk { i: 1, n: m, k } => {
                let c = m / 2;
                Some(if m % 2 == 0 { 2 * c * c + k } else { 2 * c * c + 2 * c - k + 1 })
            }
            Family::Tnk { i: 0, n: m, k } => {
                if m % 2 == 1 {
                    let c = m / 2;
                    Some(2 * c * c + 2 * c + 1 + k)
                } else {
                    let c = m / 2 - 1;
                    Some(2 * c * c + 4 * c - k + 2)
                }
            }
            _ => None,
        },
        CaseLabel::OutsideF2n(_) => None,
    }
}

/// Ray-set bricks in embedding order, truncated after `bound` elements.
pub fn enumerate_types(case: CaseLabel, bound: usize) -> Vec<TypeCode> {
    let mut out = Vec::with_capacity(bound);
    match case {
        CaseLabel::Case1 | CaseLabel::Case2 => out.extend((0..bound).map(TypeCode::t_n)),
        CaseLabel::Case3a | CaseLabel::Case3b => {
            out.extend([TypeCode::t_n(0), TypeCode::t_n(1)]);
            let mut c = 1;
            while out.len() < bound {
                out.push(TypeCode::t_n(2 * c));
                out.extend((1..=c).map(|k| TypeCode::t_nk(1, 2 * c, k)));
                out.extend((1..=c).rev().map(|k| TypeCode::t_nk(1, 2 * c + 1, k)));
                out.push(TypeCode::t_n(2 * c + 1));
                out.extend((1..=c).map(|k| TypeCode::t_nk(0, 2 * c + 1, k)));
                out.extend((1..=c).rev().map(|k| TypeCode::t_nk(0, 2 * c + 2, k)));
                c += 1;
            }
        }
        CaseLabel::OutsideF2n(_) => {}
    }
    out.truncate(bound);
    out
}

/// Codes of the set converging to ω0 (case 3) in the order
/// `T_∞, T^1_1, T^0_1, T^1_2, T^0_2, …, T^1_∞, T^0_∞`, with `k ≤ bound`.
pub fn enumerate_arc_types(case: CaseLabel, bound: usize) -> Vec<TypeCode> {
    match case {
        CaseLabel::Case1 | CaseLabel::Case2 => vec![TypeCode::t_inf()],
        CaseLabel::Case3a | CaseLabel::Case3b => {
            let mut out = vec![TypeCode::t_inf()];
            for k in 1..=bound {
                out.push(TypeCode::t_k(1, k));
                out.push(TypeCode::t_k(0, k));
            }
            out.push(TypeCode::t_k_inf(1));
            out.push(TypeCode::t_k_inf(0));
            out
        }
        CaseLabel::OutsideF2n(_) => Vec::new(),
    }
}

/// The junction point of two bricks whose codes differ in exactly one index `n`,
/// namely the thread `(f^n(0), …, f(0), 0, ρ, …)` read with the code carrying 0 at `n`.
pub fn connected_in(map: &UnimodalMap, t: &TypeCode, u: &TypeCode, depth: usize) -> Option<LimitPoint> {
    let horizon = t.prefix.len().max(u.prefix.len()) + 4;
    let diffs: Vec<usize> = (0..horizon).filter(|&j| t.at(j) != u.at(j)).collect();
    let [n] = diffs.as_slice() else { return None };
    let n = *n;
    let zero = if t.at(n) == 0 { t } else { u };
    let x0 = map.iterate(0.0, n);
    let p = decode_point(map, x0, zero, depth.max(n + 1)).ok()?;
    if p.code() != zero || p.thread()[n].abs() > 1e-9 {
        return None;
    }
    Some(p)
}
