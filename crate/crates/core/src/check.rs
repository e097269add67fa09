//! Outcomes of the exact verification routines.
//!
//! Every check returns `Ok(())` on PASS or the first [`Violation`] found,
//! with enough of the failing site attached to reproduce it by hand.

use std::fmt;

use crate::field::Scalar;
use crate::linalg::Vector;

pub type CheckResult = std::result::Result<(), Violation>;

/// Which left-brace law failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraceLaw {
    /// `a∘(b+c) + a = a∘b + a∘c`
    Distributivity,
    /// `(a∘b)*c = a*c + b*c + a*(b*c)`
    StarCompatibility,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Basis triple (0-based) at which the pre-Lie associator is not symmetric.
    PreLieIdentity {
        i: usize,
        j: usize,
        k: usize,
        residual: Vector,
    },
    LeftBrace {
        law: BraceLaw,
        a: Vector,
        b: Vector,
        c: Vector,
    },
    Associativity {
        a: Vector,
        b: Vector,
        c: Vector,
    },
    Identity {
        a: Vector,
    },
    Inverse {
        a: Vector,
    },
    FBrace {
        scalar: Scalar,
        a: Vector,
        b: Vector,
    },
    NotStronglyNilpotent {
        class_bound: usize,
    },
    Bilinearity {
        detail: String,
    },
    ScalingIdentity {
        n: u32,
    },
    LimitLaw {
        n: u32,
        degree: usize,
    },
    SumStar {
        a: Vector,
        b: Vector,
        c: Vector,
    },
    FlowsBch {
        a: Vector,
        b: Vector,
    },
    Mismatch {
        detail: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PreLieIdentity { i, j, k, residual } => write!(
                f,
                "pre-Lie identity fails at basis triple (e{}, e{}, e{}), residual {residual}",
                i + 1,
                j + 1,
                k + 1
            ),
            Violation::LeftBrace { law, a, b, c } => {
                let name = match law {
                    BraceLaw::Distributivity => "a∘(b+c)+a = a∘b+a∘c",
                    BraceLaw::StarCompatibility => "(a∘b)*c = a*c+b*c+a*(b*c)",
                };
                write!(f, "left-brace law {name} fails at a={a}, b={b}, c={c}")
            }
            Violation::Associativity { a, b, c } => {
                write!(f, "circle product not associative at a={a}, b={b}, c={c}")
            }
            Violation::Identity { a } => write!(f, "0 is not a two-sided identity at a={a}"),
            Violation::Inverse { a } => write!(f, "inverse of {a} is not two-sided"),
            Violation::FBrace { scalar, a, b } => {
                write!(f, "a*(eb) != e(a*b) at e={scalar}, a={a}, b={b}")
            }
            Violation::NotStronglyNilpotent { class_bound } => {
                write!(
                    f,
                    "strong radical chain does not vanish by step {class_bound}"
                )
            }
            Violation::Bilinearity { detail } => write!(f, "dot product not bilinear: {detail}"),
            Violation::ScalingIdentity { n } => {
                write!(f, "2^n V(2^-n a, b) != (2 M^-1)^n V(a, b) at n={n}")
            }
            Violation::LimitLaw { n, degree } => {
                write!(
                    f,
                    "degree-{degree} deviation does not scale by 2^(1-{degree}) at step {n}"
                )
            }
            Violation::SumStar { a, b, c } => {
                write!(
                    f,
                    "expanded (a+b)*c disagrees with the brace at a={a}, b={b}, c={c}"
                )
            }
            Violation::FlowsBch { a, b } => write!(f, "W(a)∘W(b) != W(C(a,b)) at a={a}, b={b}"),
            Violation::Mismatch { detail } => write!(f, "mismatch: {detail}"),
        }
    }
}
