//! Airy functions, their negative zeros, and the unperturbed bouncer basis.

mod basis;
mod eval;
mod zeros;

pub use basis::{AiryBasis, AiryForm, Poly, TAIL_MARGIN};
pub use eval::{ai, airy_pair, aip, AIP_ZERO, AI_ZERO};
pub use zeros::{zero, zero_seed};
