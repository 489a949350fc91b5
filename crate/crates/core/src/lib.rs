//! Regular LDPC codes and decoders modelled after an autonomous photonic
//! circuit of optical latches.
//!
//! The crate is split into:
//!
//! * [`code`]: Tanner graphs of `(n, l, k)`-regular codes, syndromes, rates.
//! * [`channel`]: binary symmetric channel and fixed-weight corruption.
//! * [`flipdec`]: the classical sequential bit-flip decoder and its idealised
//!   continuous-time version.
//! * [`ctmc`]: the photonic decoder circuit as a continuous-time Markov jump
//!   process over variable and check latch states.

pub mod channel;
pub mod code;
pub mod ctmc;
mod error;
pub mod flipdec;
mod sumtree;

pub use channel::ErrorPattern;
pub use code::{Assignment, TannerGraph};
pub use error::{Error, Result};
