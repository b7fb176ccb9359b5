//! Exact counting, enumeration and bijective maps for `s`-separated `k`-sets
//! in systems of circles.
//!
//! A set of objects drawn from circles of sizes `n_1, ..., n_p` is
//! `s`-separated when no two chosen objects on the same circle have fewer
//! than `s` objects between them. When every circle has at least `sk + 1`
//! objects the number of such `k`-sets is `N/k * C(N - sk - 1, k - 1)` with
//! `N = n_1 + ... + n_p`, and the number containing any fixed object is
//! `C(N - sk - 1, k - 1)`.
//!
//! - [`system`]: ground sets, the separation predicate, flatten/unflatten.
//! - [`enumerate`]: brute-force and pruned enumerators.
//! - [`count`]: closed forms, the fixed-element recursion, convolutions.
//! - [`bijection`]: the zig/zag procedures and the two-circle bijection.
//! - [`verify`]: the sweep harness that checks every identity.

pub mod bijection;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod par;
pub mod system;
pub mod verify;

pub use count::CountValue;
pub use enumerate::EnumerationRequest;
pub use error::{Error, Result};
pub use system::{CircleSystem, Element, SelectionSet, SeparationParams};
