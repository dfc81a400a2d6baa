use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its invariant. `field` names the offending item.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("step size {dt} s exceeds the stability limit {limit} s ({context})")]
    StepSize {
        dt: f64,
        limit: f64,
        context: String,
    },

    #[error("trace error: {0}")]
    Trace(String),

    /// Caller asked to localize a crossing that the bracket does not contain.
    #[error("no threshold crossing of {threshold} between {v_before} and {v_after}")]
    NoCrossing {
        v_before: f64,
        v_after: f64,
        threshold: f64,
    },

    #[error("fit failed: {reason} (residual rms {residual_rms})")]
    Fit { reason: String, residual_rms: f64 },

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error("unit {index}: {source}")]
    Unit {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Dotted path of the offending config field, e.g. `units[1].electrical.leak_resistance`.
    pub fn field_path(&self) -> Option<String> {
        match self {
            Error::Config { field, .. } => Some(field.clone()),
            Error::Unit { index, source } => match source.field_path() {
                Some(f) => Some(format!("units[{index}].{f}")),
                None => Some(format!("units[{index}]")),
            },
            _ => None,
        }
    }

    pub(crate) fn in_unit(self, index: usize) -> Self {
        Error::Unit {
            index,
            source: Box::new(self),
        }
    }
}
