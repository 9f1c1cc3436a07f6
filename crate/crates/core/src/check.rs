//! Residual reports shared by every verification routine.

use serde::Serialize;

/// A nonzero symbolic residual and where it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub location: String,
    pub value: String,
}

impl Residual {
    pub fn new(location: impl Into<String>, value: impl Into<String>) -> Self {
        Residual {
            location: location.into(),
            value: value.into(),
        }
    }
}

/// A named identity check. It passes iff no residuals were recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub residuals: Vec<Residual>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            residuals: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn push(&mut self, location: impl Into<String>, value: impl Into<String>) {
        self.residuals.push(Residual::new(location, value));
    }

    /// Record `value` under `location` unless `is_zero` holds.
    pub fn expect_zero(
        &mut self,
        location: impl Into<String>,
        is_zero: bool,
        render: impl FnOnce() -> String,
    ) {
        if !is_zero {
            self.push(location, render());
        }
    }

    pub fn absorb(&mut self, other: Check) {
        let prefix = other.name;
        self.residuals
            .extend(other.residuals.into_iter().map(|r| Residual {
                location: format!("{prefix}: {}", r.location),
                value: r.value,
            }));
    }
}
