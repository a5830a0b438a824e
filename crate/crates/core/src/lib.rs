//! Scattering of a two-level atomic matter wave off a square optical
//! potential, and the lateral (Goos-Hänchen) shifts of the reflected
//! and transmitted beams.
//!
//! Everything is expressed in scaled units: rates in units of the excited
//! state decay rate `γ`, wavenumbers in units of `k_γ = √(2mγ/ħ)`, lengths in
//! `1/k_γ`, times in `1/γ` and energies in `ħγ`. See `docs/scaled-units.md`
//! at the repository root for the reduction.
//!
//! The crate is `no_std` and only needs `alloc` (for the dense oracle solve
//! and the wavepacket grids).
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dressed;
mod error;
pub mod linalg;
pub mod params;
pub mod scattering;
pub mod shifts;
pub mod wavepacket;

pub use num_complex::Complex64;

pub use crate::dressed::DressedFrame;
pub use crate::error::{Error, Result};
pub use crate::params::{Kinematics, ScaledParams};
pub use crate::scattering::{scatter, scatter_at, ScatterCoeffs, Scattering, TransferBlocks};
pub use crate::shifts::{Channel, ShiftOptions, ShiftResult};
pub use crate::wavepacket::{PacketField, PacketSpec};



/// Principal square root with the branch fixed on the cut: `Re ≥ 0`, and
/// `Im ≥ 0` whenever `Re == 0`.
pub(crate) fn principal_sqrt(z: Complex64) -> Complex64 {
    let mut r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        r = -r;
    }
    // sqrt of a negative real with a -0.0 imaginary part lands on -i|z|
    if r.re == 0.0 && r.im < 0.0 {
        r.im = -r.im;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_sqrt_branch() {
        let r = principal_sqrt(Complex64::new(-9.0, -0.0));
        assert_eq!(r, Complex64::new(0.0, 3.0));
        let r = principal_sqrt(Complex64::new(-9.0, 0.0));
        assert_eq!(r, Complex64::new(0.0, 3.0));
        let r = principal_sqrt(Complex64::new(4.0, 0.0));
        assert_eq!(r, Complex64::new(2.0, 0.0));
        let r = principal_sqrt(Complex64::new(1.0, -1.0));
        assert!(r.re > 0.0 && r.im < 0.0);
    }
}
