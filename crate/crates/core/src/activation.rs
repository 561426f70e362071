//! Scalar activation functions and their derivatives and inverses.
//!
//! The piecewise linear unit is identity on `[-c, c]` and continues with slope
//! `alpha` outside it:
//!
//! ```text
//! plu(x) = max(alpha (x + c) - c, min(alpha (x - c) + c, x))
//! ```
//!
//! It is odd, strictly increasing and unbounded, so unlike ReLU it has an inverse
//! on the whole real line.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_C: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActivationKind {
    Plu,
    Tanh,
    Relu,
    LeakyRelu,
    Identity,
}

impl ActivationKind {
    pub const ALL: [ActivationKind; 5] = [
        ActivationKind::Plu,
        ActivationKind::Tanh,
        ActivationKind::Relu,
        ActivationKind::LeakyRelu,
        ActivationKind::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Plu => "plu",
            ActivationKind::Tanh => "tanh",
            ActivationKind::Relu => "relu",
            ActivationKind::LeakyRelu => "leaky_relu",
            ActivationKind::Identity => "identity",
        }
    }
}

impl fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ActivationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ActivationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown activation `{s}`")))
    }
}

/// An activation kind with its parameters.
///
/// `alpha` is the outer slope for `plu` and the negative slope for `leaky_relu`;
/// `c` is the knee position of `plu`. Both are carried for every kind so a model
/// file always records them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Activation {
    kind: ActivationKind,
    alpha: f64,
    c: f64,
}

impl Activation {
    /// Validates parameters for `kind`.
    pub fn new(kind: ActivationKind, alpha: f64, c: f64) -> Result<Self> {
        let slope_ok = alpha > 0.0 && alpha < 1.0;
        let knee_ok = c > 0.0 && c.is_finite();
        match kind {
            ActivationKind::Plu if !slope_ok || !knee_ok => Err(Error::config(format!(
                "plu needs 0 < alpha < 1 and c > 0, got alpha={alpha}, c={c}"
            ))),
            ActivationKind::LeakyRelu if !slope_ok => Err(Error::config(format!(
                "leaky_relu needs 0 < alpha < 1, got alpha={alpha}"
            ))),
            _ => Ok(Self { kind, alpha, c }),
        }
    }

    pub fn plu(alpha: f64, c: f64) -> Result<Self> {
        Self::new(ActivationKind::Plu, alpha, c)
    }

    /// Activation of `kind` with the default `alpha = 0.1`, `c = 1`.
    pub fn with_defaults(kind: ActivationKind) -> Self {
        Self::new(kind, DEFAULT_ALPHA, DEFAULT_C).expect("defaults are valid")
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn forward(&self, x: f64) -> f64 {
        let (alpha, c) = (self.alpha, self.c);
        match self.kind {
            ActivationKind::Plu => {
                if x > c {
                    alpha * (x - c) + c
                } else if x < -c {
                    alpha * (x + c) - c
                } else {
                    x
                }
            }
            ActivationKind::Tanh => x.tanh(),
            ActivationKind::Relu => x.max(0.0),
            ActivationKind::LeakyRelu => {
                if x < 0.0 {
                    alpha * x
                } else {
                    x
                }
            }
            ActivationKind::Identity => x,
        }
    }

    /// Derivative at `x`. At kinks the slope of the inner piece is used for `plu`
    /// (1 at `|x| = c`); ReLU uses 0 at the origin.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        match self.kind {
            ActivationKind::Plu => {
                if x.abs() > self.c {
                    self.alpha
                } else {
                    1.0
                }
            }
            ActivationKind::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            ActivationKind::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ActivationKind::LeakyRelu => {
                if x < 0.0 {
                    self.alpha
                } else {
                    1.0
                }
            }
            ActivationKind::Identity => 1.0,
        }
    }

    /// Inverse of [`forward`](Self::forward).
    ///
    /// ReLU has no inverse; tanh is only invertible on the open interval `(-1, 1)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let (alpha, c) = (self.alpha, self.c);
        match self.kind {
            ActivationKind::Plu => Ok(if y > c {
                (y - c) / alpha + c
            } else if y < -c {
                (y + c) / alpha - c
            } else {
                y
            }),
            ActivationKind::Tanh => {
                if y.abs() < 1.0 {
                    Ok(y.atanh())
                } else {
                    Err(Error::Domain {
                        kind: self.kind,
                        value: y,
                    })
                }
            }
            ActivationKind::Relu => Err(Error::NotInvertible(self.kind)),
            ActivationKind::LeakyRelu => Ok(if y < 0.0 { y / alpha } else { y }),
            ActivationKind::Identity => Ok(y),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.kind != ActivationKind::Relu
    }

    /// Points where the derivative is discontinuous.
    pub fn kinks(&self) -> Vec<f64> {
        match self.kind {
            ActivationKind::Plu => vec![-self.c, self.c],
            ActivationKind::Relu | ActivationKind::LeakyRelu => vec![0.0],
            ActivationKind::Tanh | ActivationKind::Identity => Vec::new(),
        }
    }

    /// Distance from `x` to the nearest kink (infinite for smooth kinds).
    pub fn kink_distance(&self, x: f64) -> f64 {
        self.kinks()
            .into_iter()
            .map(|k| (x - k).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ActivationKind::Plu => write!(f, "plu(alpha={}, c={})", self.alpha, self.c),
            ActivationKind::LeakyRelu => write!(f, "leaky_relu(alpha={})", self.alpha),
            k => write!(f, "{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plu() -> Activation {
        Activation::plu(0.1, 1.0).unwrap()
    }

    #[test]
    fn plu_forward_hand_values() {
        let a = plu();
        assert_eq!(a.forward(0.0), 0.0);
        assert!((a.forward(2.0) - 1.1).abs() < 1e-12);
        assert!((a.forward(-2.0) + 1.1).abs() < 1e-12);
        assert_eq!(a.forward(0.5), 0.5);
    }

    #[test]
    fn other_forward_values() {
        assert_eq!(
            Activation::with_defaults(ActivationKind::Relu).forward(-3.0),
            0.0
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::Identity).forward(7.5),
            7.5
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::LeakyRelu).forward(-2.0),
            -0.2
        );
    }

    #[test]
    fn derivative_values() {
        let a = plu();
        assert_eq!(a.derivative(0.0), 1.0);
        assert_eq!(a.derivative(5.0), 0.1);
        assert_eq!(a.derivative(-5.0), 0.1);
        assert_eq!(a.derivative(1.0), 1.0);
        assert_eq!(a.derivative(-1.0), 1.0);
        assert_eq!(
            Activation::with_defaults(ActivationKind::Tanh).derivative(0.0),
            1.0
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::Relu).derivative(0.0),
            0.0
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::Relu).derivative(2.0),
            1.0
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::Identity).derivative(-9.0),
            1.0
        );
        assert_eq!(
            Activation::with_defaults(ActivationKind::LeakyRelu).derivative(-1.0),
            0.1
        );
    }

    #[test]
    fn inverse_values_and_errors() {
        let a = plu();
        assert!((a.inverse(1.1).unwrap() - 2.0).abs() < 1e-12);
        assert!((a.inverse(-1.1).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(a.inverse(0.5).unwrap(), 0.5);

        let relu = Activation::with_defaults(ActivationKind::Relu);
        assert_eq!(
            relu.inverse(0.3),
            Err(Error::NotInvertible(ActivationKind::Relu))
        );
        assert!(!relu.is_invertible());

        let tanh = Activation::with_defaults(ActivationKind::Tanh);
        assert!(matches!(tanh.inverse(1.0), Err(Error::Domain { .. })));
        assert!(matches!(tanh.inverse(-1.5), Err(Error::Domain { .. })));
        assert!((tanh.forward(tanh.inverse(0.75).unwrap()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn knees_are_continuous() {
        let (alpha, c) = (0.1, 1.0);
        assert_eq!(alpha * (c - c) + c, c);
        assert_eq!(alpha * (-c + c) - c, -c);
        let a = plu();
        assert_eq!(a.forward(c), c);
        assert_eq!(a.forward(-c), -c);
    }

    #[test]
    fn parameter_validation() {
        assert!(Activation::plu(0.0, 1.0).is_err());
        assert!(Activation::plu(1.0, 1.0).is_err());
        assert!(Activation::plu(0.1, 0.0).is_err());
        assert!(Activation::plu(0.1, f64::NAN).is_err());
        assert!(Activation::new(ActivationKind::LeakyRelu, 1.5, 1.0).is_err());
        // ignored parameters are stored but not checked
        let t = Activation::new(ActivationKind::Tanh, 7.0, -1.0).unwrap();
        assert_eq!((t.alpha(), t.c()), (7.0, -1.0));
    }

    #[test]
    fn names_round_trip() {
        for k in ActivationKind::ALL {
            assert_eq!(k.name().parse::<ActivationKind>().unwrap(), k);
        }
        assert!("sigmoid".parse::<ActivationKind>().is_err());
    }

    #[test]
    fn kink_distance() {
        let a = plu();
        assert_eq!(a.kink_distance(0.25), 0.75);
        assert_eq!(a.kink_distance(-1.5), 0.5);
        assert_eq!(
            Activation::with_defaults(ActivationKind::Tanh).kink_distance(0.0),
            f64::INFINITY
        );
    }
}
