use crate::error::{Error, Result};

/// Central finite-difference stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    order: u32,
    h: f64,
    per_coord: Option<Vec<f64>>,
}

const FIRST_2: &[(i32, f64)] = &[(-1, -0.5), (1, 0.5)];
const FIRST_4: &[(i32, f64)] = &[
    (-2, 1.0 / 12.0),
    (-1, -8.0 / 12.0),
    (1, 8.0 / 12.0),
    (2, -1.0 / 12.0),
];
const SECOND_2: &[(i32, f64)] = &[(-1, 1.0), (0, -2.0), (1, 1.0)];
const SECOND_4: &[(i32, f64)] = &[
    (-2, -1.0 / 12.0),
    (-1, 16.0 / 12.0),
    (0, -30.0 / 12.0),
    (1, 16.0 / 12.0),
    (2, -1.0 / 12.0),
];

impl Default for Stencil {
    fn default() -> Self {
        Self {
            order: 4,
            h: 1e-3,
            per_coord: None,
        }
    }
}

impl Stencil {
    /// Stencil of the given order (2 or 4) with one step for every coordinate.
    pub fn new(order: u32, h: f64) -> Result<Self> {
        check_order(order)?;
        check_step(h)?;
        Ok(Self {
            order,
            h,
            per_coord: None,
        })
    }

    /// Stencil with a separate step per coordinate.
    pub fn with_steps(order: u32, steps: Vec<f64>) -> Result<Self> {
        check_order(order)?;
        if steps.is_empty() {
            return Err(Error::InvalidParameter("no stencil steps given".into()));
        }
        for &h in &steps {
            check_step(h)?;
        }
        Ok(Self {
            order,
            h: steps[0],
            per_coord: Some(steps),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Step along coordinate `mu`.
    pub fn step(&self, mu: usize) -> f64 {
        match &self.per_coord {
            Some(steps) => steps.get(mu).copied().unwrap_or(self.h),
            None => self.h,
        }
    }

    /// Same order, every step multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            order: self.order,
            h: self.h * factor,
            per_coord: self
                .per_coord
                .as_ref()
                .map(|s| s.iter().map(|h| h * factor).collect()),
        }
    }

    /// Largest offset in units of the step.
    pub fn reach(&self) -> i32 {
        (self.order / 2) as i32
    }

    /// `(offset, weight)` pairs; the derivative is `Σ w·f(x + k h) / h`.
    pub fn first_weights(&self) -> &'static [(i32, f64)] {
        if self.order == 2 {
            FIRST_2
        } else {
            FIRST_4
        }
    }

    /// `(k, w)` for positive offsets of the antisymmetric first-derivative
    /// weights: `f′ ≈ Σ w·(f(x + k h) − f(x − k h)) / h`. Pairing the
    /// opposite nodes makes the derivative of a constant exactly zero.
    pub fn central_pairs(&self) -> &'static [(i32, f64)] {
        if self.order == 2 {
            &FIRST_2[1..]
        } else {
            &FIRST_4[2..]
        }
    }

    /// `(offset, weight)` pairs; the second derivative is `Σ w·f(x + k h) / h²`.
    pub fn second_weights(&self) -> &'static [(i32, f64)] {
        if self.order == 2 {
            SECOND_2
        } else {
            SECOND_4
        }
    }
}

fn check_order(order: u32) -> Result<()> {
    if order == 2 || order == 4 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "stencil order {order} unsupported (use 2 or 4)"
        )))
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "stencil step must be positive, got {h}"
        )))
    }
}
