use std::fmt;

/// Where a scan found its worst value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Nowhere,
    At(f64),
    Grid(f64, f64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Nowhere => f.write_str("-"),
            Location::At(t) => write!(f, "t={t}"),
            Location::Grid(t, s) => write!(f, "t={t};s={s}"),
        }
    }
}

/// Outcome of one numerical property check.
///
/// `pass` holds exactly when `worst_magnitude <= tolerance_used`. Strict
/// inequalities are checked with a negative tolerance (a required margin).
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub property: String,
    pub pass: bool,
    pub worst_location: Location,
    pub worst_magnitude: f64,
    pub tolerance_used: f64,
}

impl VerifyReport {
    pub fn new(
        property: impl Into<String>,
        location: Location,
        magnitude: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            property: property.into(),
            // NaN never passes
            pass: magnitude <= tolerance,
            worst_location: location,
            worst_magnitude: magnitude,
            tolerance_used: tolerance,
        }
    }

    pub fn from_worst(property: impl Into<String>, worst: Worst, tolerance: f64) -> Self {
        Self::new(property, worst.location, worst.magnitude, tolerance)
    }

    /// Tab-separated `property pass|fail location magnitude tolerance`.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:e}\t{:e}",
            self.property,
            if self.pass { "pass" } else { "fail" },
            self.worst_location,
            self.worst_magnitude,
            self.tolerance_used
        )
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Running maximum of a violation measure. NaN is sticky.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Worst {
    pub magnitude: f64,
    pub location: Location,
}

impl Worst {
    pub fn new() -> Self {
        Self {
            magnitude: f64::NEG_INFINITY,
            location: Location::Nowhere,
        }
    }

    pub fn update(&mut self, magnitude: f64, location: Location) {
        if self.magnitude.is_nan() {
            return;
        }
        if magnitude.is_nan() || magnitude > self.magnitude {
            self.magnitude = magnitude;
            self.location = location;
        }
    }

    pub fn merge(mut self, other: Worst) -> Self {
        self.update(other.magnitude, other.location);
        self
    }
}

impl Default for Worst {
    fn default() -> Self {
        Self::new()
    }
}
