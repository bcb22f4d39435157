//! Internal numerical building blocks.

pub mod dd;
pub mod fft;
pub mod fit;
pub mod hilbert;
pub mod quad;
pub mod roots;
