use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub periodic: bool,
}

impl Param {
    pub fn bounded(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            lower,
            upper,
            periodic: false,
        }
    }

    /// The interval is one period; values outside it are wrapped.
    pub fn periodic(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            periodic: true,
            ..Self::bounded(name, lower, upper)
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Box of named parameters, some of them periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSpace {
    params: Vec<Param>,
}

impl ParamSpace {
    pub fn new(params: Vec<Param>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::Domain("parameter space has no parameters".into()));
        }
        for p in &params {
            if !(p.lower.is_finite() && p.upper.is_finite()) || p.lower > p.upper {
                return Err(Error::Domain(format!(
                    "parameter `{}` has invalid bounds [{}, {}]",
                    p.name, p.lower, p.upper
                )));
            }
            if p.periodic && p.lower == p.upper {
                return Err(Error::Domain(format!(
                    "periodic parameter `{}` has zero period",
                    p.name
                )));
            }
        }
        Ok(Self { params })
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && self
                .params
                .iter()
                .zip(x)
                .all(|(p, &v)| v >= p.lower && v <= p.upper)
    }

    /// Wraps periodic coordinates into their period and clamps the rest.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.params
            .iter()
            .zip(x)
            .map(|(p, &v)| {
                if p.periodic {
                    p.lower + (v - p.lower).rem_euclid(p.width())
                } else {
                    v.clamp(p.lower, p.upper)
                }
            })
            .collect()
    }
}
