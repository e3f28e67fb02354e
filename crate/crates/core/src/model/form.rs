use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::rational::Rational;

/// An integer combination `a·α + b·β`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct LinearForm {
    #[serde(rename = "a")]
    pub alpha_coeff: i64,
    #[serde(rename = "b")]
    pub beta_coeff: i64,
}

impl LinearForm {
    pub const ZERO: LinearForm = LinearForm {
        alpha_coeff: 0,
        beta_coeff: 0,
    };

    pub const fn new(alpha_coeff: i64, beta_coeff: i64) -> Self {
        LinearForm {
            alpha_coeff,
            beta_coeff,
        }
    }

    pub const fn alpha(times: i64) -> Self {
        LinearForm::new(times, 0)
    }

    pub const fn beta(times: i64) -> Self {
        LinearForm::new(0, times)
    }

    pub fn eval(&self, alpha: &Rational, beta: &Rational) -> Rational {
        alpha * Rational::from_integer(self.alpha_coeff as i128)
            + beta * Rational::from_integer(self.beta_coeff as i128)
    }

    /// Value at `β = 1`, `α = alpha_bar`.
    pub fn eval_normalized(&self, alpha_bar: &Rational) -> Rational {
        self.eval(alpha_bar, &Rational::from_integer(1))
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: LinearForm) -> LinearForm {
        LinearForm::new(
            self.alpha_coeff + rhs.alpha_coeff,
            self.beta_coeff + rhs.beta_coeff,
        )
    }
}

impl AddAssign for LinearForm {
    fn add_assign(&mut self, rhs: LinearForm) {
        *self = *self + rhs;
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        LinearForm::new(
            self.alpha_coeff - rhs.alpha_coeff,
            self.beta_coeff - rhs.beta_coeff,
        )
    }
}

impl SubAssign for LinearForm {
    fn sub_assign(&mut self, rhs: LinearForm) {
        *self = *self - rhs;
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm::new(-self.alpha_coeff, -self.beta_coeff)
    }
}

impl Mul<i64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: i64) -> LinearForm {
        LinearForm::new(self.alpha_coeff * rhs, self.beta_coeff * rhs)
    }
}

impl Mul<LinearForm> for i64 {
    type Output = LinearForm;
    fn mul(self, rhs: LinearForm) -> LinearForm {
        rhs * self
    }
}

impl std::iter::Sum for LinearForm {
    fn sum<I: Iterator<Item = LinearForm>>(iter: I) -> LinearForm {
        iter.fold(LinearForm::ZERO, Add::add)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.alpha_coeff, self.beta_coeff) {
            (0, b) => write!(f, "{b}β"),
            (a, 0) => write!(f, "{a}α"),
            (a, b) if b < 0 => write!(f, "{a}α - {}β", -b),
            (a, b) => write!(f, "{a}α + {b}β"),
        }
    }
}
