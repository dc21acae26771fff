//! A stateless JSON-over-HTTP facade over the contract algebra and the labs.
//!
//! [`handle`] maps a method, path and body to a [`Response`] without any
//! I/O; [`serve`] puts it behind an HTTP listener.

mod api;
mod server;

pub use api::{handle, ApiRequest, Response};
pub use server::{serve, spawn, ServerConfig, REQUEST_TIMEOUT};
