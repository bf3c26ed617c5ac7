use crate::error::{invalid, Result};
use crate::numerics::{integrate, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// How the finite square stands in for the infinite plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Wrap-around distances (minimum-image convention).
    Torus,
    /// Torus whose receivers also see the mean interference of the Poisson
    /// field outside their minimum-image square, added as white noise.
    TorusFarField,
    /// Euclidean distances; only transmitters inside the centred square of
    /// side `fraction·side` contribute statistics.
    Guard { fraction: f64 },
}

/// Square simulation window `[0, side)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimWindow {
    pub side: f64,
    pub boundary: Boundary,
}

impl SimWindow {
    pub fn torus(side: f64) -> Self {
        Self {
            side,
            boundary: Boundary::Torus,
        }
    }

    pub fn guard(side: f64, fraction: f64) -> Self {
        Self {
            side,
            boundary: Boundary::Guard { fraction },
        }
    }

    /// Window whose expected node count at density `lambda` is `nodes`.
    pub fn for_expected_nodes(lambda: f64, nodes: f64, boundary: Boundary) -> Self {
        Self {
            side: (nodes / lambda).sqrt(),
            boundary,
        }
    }

    pub fn torus_far_field(side: f64) -> Self {
        Self {
            side,
            boundary: Boundary::TorusFarField,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.boundary, Boundary::Torus | Boundary::TorusFarField)
    }

    /// Mean interference power per antenna from transmitters of density
    /// `lambda_t` outside the minimum-image square, for `TorusFarField`;
    /// zero otherwise. Equals `λ_t·K(α)·(side/2)^(2−α)` with
    /// `K(α) = 8/(α−2)·∫_0^{π/4} cos^(α−2)θ dθ`.
    pub fn far_field_interference(&self, lambda_t: f64, alpha: f64) -> Result<f64> {
        if self.boundary != Boundary::TorusFarField || lambda_t == 0.0 {
            return Ok(0.0);
        }
        if !(alpha > 2.0) {
            return Err(invalid("alpha", format!("must exceed 2, got {alpha}")));
        }
        let angular = integrate(
            |t: f64| t.cos().powf(alpha - 2.0),
            0.0,
            std::f64::consts::FRAC_PI_4,
            &QuadratureSpec::default().with_tolerance(1e-13),
        )?;
        let k = 8.0 / (alpha - 2.0) * angular;
        Ok(lambda_t * k * (0.5 * self.side).powf(2.0 - alpha))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.side > 0.0 && self.side.is_finite()) {
            return Err(invalid("side", format!("must be > 0, got {}", self.side)));
        }
        if let Boundary::Guard { fraction } = self.boundary {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(invalid(
                    "guard_fraction",
                    format!("must lie in (0, 1), got {fraction}"),
                ));
            }
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * self.side, 0.5 * self.side)
    }

    /// Vector from `from` to `to` under the window metric.
    #[inline]
    pub fn displacement(&self, from: Point, to: Point) -> (f64, f64) {
        let mut dx = to.x - from.x;
        let mut dy = to.y - from.y;
        if self.is_torus() {
            let half = 0.5 * self.side;
            if dx > half {
                dx -= self.side;
            } else if dx < -half {
                dx += self.side;
            }
            if dy > half {
                dy -= self.side;
            } else if dy < -half {
                dy += self.side;
            }
        }
        (dx, dy)
    }

    #[inline]
    pub fn distance_sq(&self, a: Point, b: Point) -> f64 {
        let (dx, dy) = self.displacement(a, b);
        dx * dx + dy * dy
    }

    /// Whether a transmitter at `pt` contributes to progress statistics.
    pub fn is_eligible(&self, pt: Point) -> bool {
        match self.boundary {
            Boundary::Torus | Boundary::TorusFarField => true,
            Boundary::Guard { fraction } => {
                let c = self.center();
                let half = 0.5 * fraction * self.side;
                (pt.x - c.x).abs() <= half && (pt.y - c.y).abs() <= half
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn torus_wraps() {
        let w = SimWindow::torus(10.0);
        let d = w.distance_sq(Point::new(0.5, 0.5), Point::new(9.5, 9.5));
        assert!((d - 2.0).abs() < 1e-12);
        let g = SimWindow::guard(10.0, 0.5);
        let d = g.distance_sq(Point::new(0.5, 0.5), Point::new(9.5, 9.5));
        assert!((d - 162.0).abs() < 1e-12);
    }

    #[test]
    fn guard_eligibility() {
        let g = SimWindow::guard(10.0, 0.5);
        assert!(g.is_eligible(Point::new(5.0, 5.0)));
        assert!(g.is_eligible(Point::new(7.4, 2.6)));
        assert!(!g.is_eligible(Point::new(7.6, 5.0)));
        assert!(SimWindow::torus(10.0).is_eligible(Point::new(0.0, 0.0)));
    }

    #[test]
    fn far_field_level() {
        // α = 4: K = 8/2·∫cos²θ = π/2 + 1
        let w = SimWindow::torus_far_field(10.0);
        let got = w.far_field_interference(0.3, 4.0).unwrap();
        let expected = 0.3 * (std::f64::consts::FRAC_PI_2 + 1.0) / 25.0;
        assert!((got - expected).abs() < 1e-14);
        assert_eq!(
            SimWindow::torus(10.0)
                .far_field_interference(0.3, 4.0)
                .unwrap(),
            0.0
        );
        // brute force: mean interference from a density-1 field between the
        // square of half-side 5 and a far-away disc, plus the disc tail
        let (a, big) = (5.0f64, 400.0f64);
        let n = 4000;
        let h = 2.0 * big / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = -big + (i as f64 + 0.5) * h;
                let y = -big + (j as f64 + 0.5) * h;
                let r2 = x * x + y * y;
                if (x.abs() > a || y.abs() > a) && r2 < big * big {
                    sum += r2.powf(-1.5);
                }
            }
        }
        let total = sum * h * h + 2.0 * std::f64::consts::PI / big;
        let k = w.far_field_interference(1.0, 3.0).unwrap();
        assert!((total / k - 1.0).abs() < 2e-3, "{total} vs {k}");
    }

    #[test]
    fn validation() {
        assert!(SimWindow::torus(0.0).validate().is_err());
        assert!(SimWindow::guard(1.0, 1.0).validate().is_err());
        assert!(SimWindow::guard(1.0, 0.5).validate().is_ok());
    }

    proptest! {
        #[test]
        fn torus_distance_symmetric_and_bounded(
            ax in 0.0..50.0f64, ay in 0.0..50.0f64, bx in 0.0..50.0f64, by in 0.0..50.0f64
        ) {
            let w = SimWindow::torus(50.0);
            let a = Point::new(ax, ay);
            let b = Point::new(bx, by);
            let ab = w.distance_sq(a, b);
            let ba = w.distance_sq(b, a);
            prop_assert!((ab - ba).abs() <= 1e-9);
            // half-diagonal of the window
            prop_assert!(ab.sqrt() <= 50.0 / 2f64.sqrt() + 1e-9);
        }
    }
}
