use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Circle,
    Square,
    OffsetCircle,
}

/// Growing regions `Γ(·, b)`: a circle of radius `scale·b`, an axis-aligned
/// square of half-side `scale·b`, or a circle of radius `scale·b` about
/// `offset`. Each eventually covers any bounded set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFamily {
    pub kind: FamilyKind,
    #[serde(default)]
    pub offset: [f64; 2],
    #[serde(default = "unit")]
    pub scale: f64,
}

fn unit() -> f64 {
    1.0
}

impl CurveFamily {
    pub fn circle() -> Self {
        Self {
            kind: FamilyKind::Circle,
            offset: [0.0, 0.0],
            scale: 1.0,
        }
    }

    pub fn square() -> Self {
        Self {
            kind: FamilyKind::Square,
            offset: [0.0, 0.0],
            scale: 1.0,
        }
    }

    pub fn offset_circle(offset: [f64; 2]) -> Self {
        Self {
            kind: FamilyKind::OffsetCircle,
            offset,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("family scale must be positive, got {}", self.scale)));
        }
        if !self.offset.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("family offset must be finite".into()));
        }
        if self.kind != FamilyKind::OffsetCircle && self.offset != [0.0, 0.0] {
            return Err(Error::InvalidArgument(format!(
                "only offset_circle takes an offset, got {:?}",
                self.offset
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let base = match self.kind {
            FamilyKind::Circle => "circle".to_string(),
            FamilyKind::Square => "square".to_string(),
            FamilyKind::OffsetCircle => format!("offset_circle({},{})", self.offset[0], self.offset[1]),
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{base}x{}", self.scale)
        }
    }

    pub fn is_round(&self) -> bool {
        self.kind != FamilyKind::Square
    }

    pub fn center(&self) -> [f64; 2] {
        self.offset
    }

    /// Radius, or half-side for the square.
    pub fn size(&self, b: f64) -> f64 {
        self.scale * b
    }

    /// Indicator of the closed region: 1 inside or on the curve.
    pub fn contains(&self, r: [f64; 2], b: f64) -> bool {
        let (dx, dy) = (r[0] - self.offset[0], r[1] - self.offset[1]);
        let s = self.size(b);
        match self.kind {
            FamilyKind::Square => dx.abs() <= s && dy.abs() <= s,
            _ => dx.hypot(dy) <= s,
        }
    }

    /// Radius of the largest origin-centered disk inside the region.
    pub fn inscribed_radius(&self, b: f64) -> f64 {
        (self.size(b) - self.offset[0].hypot(self.offset[1])).max(0.0)
    }

    /// Radius of the smallest origin-centered disk containing the region.
    pub fn outer_radius(&self, b: f64) -> f64 {
        let s = self.size(b);
        match self.kind {
            FamilyKind::Square => s * std::f64::consts::SQRT_2,
            _ => s + self.offset[0].hypot(self.offset[1]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_is_closed() {
        let c = CurveFamily::circle();
        assert!(c.contains([3.0, 4.0], 5.0));
        assert!(!c.contains([3.0, 4.0001], 5.0));
        let s = CurveFamily::square();
        assert!(s.contains([5.0, -5.0], 5.0));
        assert!(!s.contains([5.0001, 0.0], 5.0));
        let o = CurveFamily::offset_circle([1.0, 0.0]);
        assert!(o.contains([6.0, 0.0], 5.0));
        assert!(!o.contains([-4.5, 0.0], 5.0));
    }

    #[test]
    fn regions_grow_without_bound() {
        for fam in [CurveFamily::circle(), CurveFamily::square(), CurveFamily::offset_circle([3.0, -2.0])] {
            assert!(fam.inscribed_radius(1e6) > 9e5);
            assert!(fam.outer_radius(10.0) >= fam.inscribed_radius(10.0));
        }
    }

    #[test]
    fn json_schema() {
        let f: CurveFamily = serde_json::from_str(r#"{"kind": "offset_circle", "offset": [1, 0]}"#).unwrap();
        assert_eq!(f, CurveFamily::offset_circle([1.0, 0.0]));
        assert_eq!(f.label(), "offset_circle(1,0)");
        let s: CurveFamily = serde_json::from_str(r#"{"kind": "square"}"#).unwrap();
        assert_eq!(s, CurveFamily::square());
        assert!(CurveFamily { offset: [1.0, 0.0], ..CurveFamily::circle() }.check().is_err());
    }
}
