use crate::{Approx, QError, C64};
use std::fmt;
use std::sync::Arc;

type Eval = dyn Fn(C64) -> Result<Approx, QError> + Send + Sync;

/// An evaluatable entire function with a description for reports.
#[derive(Clone)]
pub struct EntireFunctionHandle {
    tag: String,
    params: Vec<(String, C64)>,
    /// Base `b_i` of a power-behaviour solution, if the handle is one.
    pub base: Option<C64>,
    f: Arc<Eval>,
}

impl EntireFunctionHandle {
    pub fn new(tag: impl Into<String>, f: impl Fn(C64) -> Result<Approx, QError> + Send + Sync + 'static) -> Self {
        EntireFunctionHandle {
            tag: tag.into(),
            params: Vec::new(),
            base: None,
            f: Arc::new(f),
        }
    }

    pub fn with_param(mut self, name: impl Into<String>, v: C64) -> Self {
        self.params.push((name.into(), v));
        self
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn params(&self) -> &[(String, C64)] {
        &self.params
    }

    pub fn eval(&self, u: C64) -> Result<Approx, QError> {
        (self.f)(u)
    }

    /// Value, `NaN` if evaluation fails.
    pub fn value(&self, u: C64) -> C64 {
        self.eval(u).map(|a| a.value).unwrap_or(C64::new(f64::NAN, f64::NAN))
    }
}

impl fmt::Debug for EntireFunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntireFunctionHandle")
            .field("tag", &self.tag)
            .field("params", &self.params)
            .finish()
    }
}
