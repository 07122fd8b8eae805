pub mod catalog;
pub mod cli;
pub mod constructor;
pub mod dlx;
pub mod engine;
pub mod error;
pub mod format;
pub mod latin;
pub mod model;
pub mod notation;
pub mod perm;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Block, Collection, Element, MuWayTrade};
