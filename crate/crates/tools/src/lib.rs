//! Shard files, the `rfc` command-line tool and Monte-Carlo experiments for
//! [`rfc_core`].

pub mod commands;
pub mod parse;
pub mod shard;
pub mod sim;
