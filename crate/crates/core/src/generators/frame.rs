//! The map between the rotating sphere and the sphere at rest:
//! `t̃ = t`, `λ̃ = λ + Ωt`, `μ̃ = μ`, `ψ̃ = ψ − Ωμ` (unit radius).

use super::transform::{Elementary, PointTransformation, Pushforward};
use super::{Frame, SphereGenerator};
use crate::error::{Error, Result};
use crate::field::SharedField;
use crate::timefn::TimeFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameDirection {
    ToRest,
    ToRotating,
}

pub type FrameMapped = Pushforward;

/// Re-expresses a solution of the rotating equation in rest coordinates, or
/// the reverse.
pub fn frame_transform(field: SharedField, omega: f64, direction: FrameDirection) -> FrameMapped {
    let step = match direction {
        FrameDirection::ToRest => Elementary::FrameToRest(omega),
        FrameDirection::ToRotating => Elementary::FrameToRotating(omega),
    };
    PointTransformation::single(step).pushforward(field)
}

/// Moves a generator between the rotating algebra with angular velocity
/// `omega` and the rest algebra. Coefficients are stored in rest coordinates,
/// so only the frame tag changes.
pub fn map_generator_between_frames(v: &SphereGenerator, omega: f64) -> Result<SphereGenerator> {
    let frame = match v.frame {
        Frame::Rotating { omega: o } if o == omega => Frame::Rest,
        Frame::Rotating { omega: o } => {
            return Err(Error::InvalidParameter(format!(
                "generator belongs to Ω = {o}, asked to map with Ω = {omega}"
            )))
        }
        Frame::Rest if omega == 0.0 => Frame::Rest,
        Frame::Rest => Frame::Rotating { omega },
    };
    Ok(SphereGenerator { frame, ..v.clone() })
}

/// Basis of the rotating-frame algebra, in rotating coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum RotatingBasis {
    D,
    Dt,
    J1,
    J2,
    J3,
    Z(TimeFunction),
}

impl RotatingBasis {
    /// The same vector field as a rest-coordinate generator tagged with the
    /// rotating frame.
    pub fn to_generator(&self, omega: f64) -> SphereGenerator {
        let frame = Frame::Rotating { omega };
        match self {
            RotatingBasis::D => SphereGenerator::d(frame),
            RotatingBasis::Dt => SphereGenerator {
                a_t: 1.0,
                rot: [omega, 0.0, 0.0],
                ..SphereGenerator::zero(frame)
            },
            RotatingBasis::J1 => SphereGenerator::j(frame, 1),
            RotatingBasis::J2 => SphereGenerator::j(frame, 2),
            RotatingBasis::J3 => SphereGenerator::j(frame, 3),
            RotatingBasis::Z(g) => SphereGenerator::z(frame, g.clone()),
        }
    }
}

/// Closed-form coefficients `(ξt, ξλ, ξμ, ξψ)` of the rotating basis.
pub fn rotating_basis_field(basis: &RotatingBasis, omega: f64, p: [f64; 4]) -> Result<[f64; 4]> {
    let [t, lambda, mu, psi] = p;
    let tilted = || -> Result<(f64, f64, f64)> {
        if mu.abs() >= 1.0 {
            return Err(Error::Domain(format!("J2/J3 are singular at the pole μ = {mu}")));
        }
        let (s, c) = (lambda + omega * t).sin_cos();
        Ok(((1.0 - mu * mu).sqrt(), s, c))
    };
    Ok(match basis {
        RotatingBasis::D => [t, -omega * t, 0.0, -(psi - omega * mu)],
        RotatingBasis::Dt => [1.0, 0.0, 0.0, 0.0],
        RotatingBasis::J1 => [0.0, 1.0, 0.0, 0.0],
        RotatingBasis::J2 => {
            let (r, s, c) = tilted()?;
            [0.0, mu * s / r, r * c, omega * r * c]
        }
        RotatingBasis::J3 => {
            let (r, s, c) = tilted()?;
            [0.0, mu * c / r, -r * s, -omega * r * s]
        }
        RotatingBasis::Z(g) => [0.0, 0.0, 0.0, g.eval(t)?],
    })
}
