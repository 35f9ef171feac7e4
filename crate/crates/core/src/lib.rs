//! Cross-channel breaking-news latency measurement.
//!
//! Seeds events from Wikipedia's Current Events Portal and Polymarket, drafts
//! boolean queries, pulls mentions from a social-listening provider, recovers
//! X publish times from snowflake ids, verifies on-topic evidence and renders
//! coverage, winner-share and paired-latency tables.

pub mod analytics;
pub mod clock;
pub mod config;
pub mod drafting;
pub mod error;
pub mod fixtures;
pub mod http;
pub mod model;
pub mod pipeline;
pub mod polymarket;
pub mod provider;
pub mod store;
pub mod wcep;
pub mod text;
pub mod verify;
pub mod xrecover;

pub use error::{Error, Result};
