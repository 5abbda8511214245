//! Domain types, physical constants and unit conventions (SI throughout).

pub mod body;
pub mod constants;
pub mod orientation;
pub mod scenario;
pub mod state;

pub use body::{derive_body_properties, BodyProperties, MagnetBody, Shape};
pub use constants::{Frequency, PhysicalConstants, MU0};
pub use orientation::EulerZyz;
pub use scenario::{ForceModel, InitialCondition, IntegrationSpec, TrapScenario};
pub use state::{RigidState, STATE_DIM};

/// Serialises a unit quaternion as `[w, x, y, z]`.
pub mod serde_quat {
    use nalgebra::{Quaternion, UnitQuaternion};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &UnitQuaternion<f64>, s: S) -> Result<S::Ok, S::Error> {
        let c = q.quaternion();
        [c.w, c.i, c.j, c.k].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UnitQuaternion<f64>, D::Error> {
        let [w, x, y, z] = <[f64; 4]>::deserialize(d)?;
        let q = Quaternion::new(w, x, y, z);
        if !(q.norm() > 0.0) {
            return Err(serde::de::Error::custom("orientation quaternion must be non-zero"));
        }
        Ok(UnitQuaternion::from_quaternion(q))
    }
}
