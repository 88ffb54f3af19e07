use thiserror::Error;

use crate::map_family::CaseLabel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular composition: normalized determinant {det:e} below threshold")]
    SingularComposition { det: f64 },

    #[error("pole at x = {at}")]
    Pole { at: f64 },

    #[error("{}", .0.iter().map(|c| format!("{c} violated")).collect::<Vec<_>>().join("; "))]
    Constraint(Vec<&'static str>),

    #[error("left branch has a pole on [0, rho] (gamma*x + delta vanishes)")]
    PoleOnDomain,

    #[error("x = {x} outside [0, 1]")]
    Domain { x: f64 },

    #[error("y = {y} outside the image of branch {branch}{}", .step.map(|k| format!(" at thread step {k}")).unwrap_or_default())]
    Image { branch: u8, y: f64, step: Option<usize> },

    #[error("operation requires {required}, map is {found}")]
    WrongCase { required: &'static str, found: CaseLabel },

    #[error("empty brick for code {code}")]
    EmptyBrick { code: String },

    #[error("thread depth exhausted")]
    DepthExhausted,

    #[error("code {code} is not in {set}")]
    Membership { code: String, set: &'static str },

    #[error("value {value} outside the covered range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("{0}")]
    Landmark(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
