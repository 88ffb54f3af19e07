//! Real Möbius transformations `x ↦ (ax + b)/(cx + d)` stored as normalized 2×2 matrices.

use crate::error::{Error, Result};

/// Below this magnitude a normalized denominator counts as a pole.
pub const POLE_TOL: f64 = 1e-14;
/// Below this magnitude a normalized determinant counts as singular.
pub const DET_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusTransform {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

/// Result of [`MoebiusTransform::fixed_points`].
#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoints {
    /// Real fixed points in ascending order (possibly empty).
    Roots(Vec<f64>),
    /// The transform is the identity.
    AllPoints,
}

impl FixedPoints {
    pub fn roots(&self) -> &[f64] {
        match self {
            FixedPoints::Roots(r) => r,
            FixedPoints::AllPoints => &[],
        }
    }
}

impl MoebiusTransform {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::SingularComposition { det: 0.0 });
        }
        let m = MoebiusTransform { a: a / scale, b: b / scale, c: c / scale, d: d / scale };
        let det = m.determinant();
        if det.abs() < DET_TOL {
            return Err(Error::SingularComposition { det });
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MoebiusTransform { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Normalized coefficients `(a, b, c, d)`.
    pub fn coefficients(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn is_identity(&self) -> bool {
        self.b == 0.0 && self.c == 0.0 && self.a == self.d
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusTransform) -> Result<Self> {
        MoebiusTransform::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    fn denominator(&self, x: f64) -> Result<f64> {
        let den = self.c * x + self.d;
        if den.abs() < POLE_TOL {
            return Err(Error::Pole { at: -self.d / self.c });
        }
        Ok(den)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let den = self.denominator(x)?;
        Ok((self.a * x + self.b) / den)
    }

    pub fn invert(&self) -> Self {
        // The adjugate has the same normalization and determinant.
        MoebiusTransform { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn derivative_at(&self, x: f64) -> Result<f64> {
        let den = self.denominator(x)?;
        Ok(self.determinant() / (den * den))
    }

    /// Roots of `c x² + (d − a) x − b = 0`.
    pub fn fixed_points(&self) -> FixedPoints {
        if self.is_identity() {
            return FixedPoints::AllPoints;
        }
        let (qa, qb, qc) = (self.c, self.d - self.a, -self.b);
        let mut roots = Vec::with_capacity(2);
        if qa == 0.0 {
            if qb != 0.0 {
                roots.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let q = -0.5 * (qb + qb.signum() * disc.sqrt());
                if q == 0.0 {
                    roots.push(0.0);
                } else {
                    roots.push(q / qa);
                    if disc > 0.0 {
                        roots.push(qc / q);
                    }
                }
            }
        }
        roots.retain(|r| r.is_finite() && (self.c * r + self.d).abs() >= POLE_TOL);
        roots.sort_by(f64::total_cmp);
        FixedPoints::Roots(roots)
    }

    pub fn is_involution(&self, tol: f64) -> bool {
        self.trace().abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f0(rho: f64, delta: f64, gamma: f64, alpha: f64) -> MoebiusTransform {
        MoebiusTransform::new(alpha, -alpha * rho, gamma, delta).unwrap()
    }

    fn f1(rho: f64) -> MoebiusTransform {
        MoebiusTransform::new(1.0, -rho, 0.0, 1.0 - rho).unwrap()
    }

    #[test]
    fn identity_compose_and_inverse() {
        let m = MoebiusTransform::new(2.0, -1.0, 0.5, 3.0).unwrap();
        assert_eq!(MoebiusTransform::identity().compose(&m).unwrap(), m);
        let id = m.compose(&m.invert()).unwrap();
        assert!(id.is_identity() || (id.b.abs() < 1e-15 && id.c.abs() < 1e-15));
        assert_eq!(MoebiusTransform::identity().invert(), MoebiusTransform::identity());
        let back = m.invert().invert();
        for x in [0.0, 0.3, 1.0] {
            assert!((back.evaluate(x).unwrap() - m.evaluate(x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(f0(0.5, 1.0, 0.0, -1.0).evaluate(0.0).unwrap(), 0.5);
        assert!((f0(0.3, 1.0, -2.0, -1.3).evaluate(0.0).unwrap() - 0.39).abs() < 1e-15);
        assert_eq!(f1(0.3).evaluate(1.0).unwrap(), 1.0);
        let inv = f1(0.5).invert();
        assert!((inv.evaluate(0.4).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let m = MoebiusTransform::new(1.0, 0.0, 1.0, -0.5).unwrap();
        match m.evaluate(0.5) {
            Err(Error::Pole { at }) => assert!((at - 0.5).abs() < 1e-15),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(MoebiusTransform::identity().derivative_at(0.7).unwrap(), 1.0);
        let m = f0(0.3, 1.0, -2.0, -1.2);
        let der = m.derivative_at(0.2).unwrap();
        assert!((der + 4.0 / 3.0).abs() < 1e-12);
        let h = 1e-6;
        let fd = (m.evaluate(0.2 + h).unwrap() - m.evaluate(0.2 - h).unwrap()) / (2.0 * h);
        assert!((fd - der).abs() < 1e-6);
        assert!((f0(0.5, 2.0, 0.0, -1.0).derivative_at(0.1).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_examples() {
        let r = f0(0.5, 2.0, 0.0, -1.0).fixed_points();
        assert_eq!(r.roots().len(), 1);
        assert!((r.roots()[0] - 1.0 / 6.0).abs() < 1e-15);

        let r = f0(0.3, 1.0, -2.0, -1.2).fixed_points();
        let roots = r.roots();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.2).abs() < 1e-14 && (roots[1] - 0.9).abs() < 1e-14);

        let shift = MoebiusTransform::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(shift.fixed_points(), FixedPoints::Roots(vec![]));
        assert_eq!(MoebiusTransform::identity().fixed_points(), FixedPoints::AllPoints);
    }

    #[test]
    fn involution_examples() {
        let reflect = MoebiusTransform::new(-1.0, 0.3, 0.0, 1.0).unwrap();
        assert!(reflect.is_involution(1e-12));

        let (rho, delta, gamma) = (0.3, 1.0, -2.0);
        let b = f0(rho, delta, gamma, -1.3).compose(&f1(rho)).unwrap();
        assert!(b.is_involution(1e-12));
        for i in 0..100 {
            let x = rho + (0.39 - rho) * i as f64 / 99.0;
            let y = b.evaluate(b.evaluate(x).unwrap()).unwrap();
            assert!((y - x).abs() < 1e-12);
        }

        let a = f0(rho, delta, gamma, -1.2).compose(&f1(rho)).unwrap();
        assert!(!a.is_involution(1e-9));
        // Unnormalized trace is α − γρ + δ(1 − ρ) = 0.1; the largest coefficient is |γ| = 2.
        assert!((a.trace() - 0.05).abs() < 1e-14);
    }

    #[test]
    fn singular_product_is_rejected() {
        assert!(matches!(MoebiusTransform::new(1.0, 2.0, 2.0, 4.0), Err(Error::SingularComposition { .. })));
    }
}
