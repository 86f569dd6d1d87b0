//! Move-by-move play of the four games over a line-delimited JSON protocol.

mod protocol;
mod server;
mod session;

pub use protocol::{handle, handle_line, ErrorBody, Op, Request, Response, PROTOCOL_VERSION};
pub use server::serve;
pub use session::{Session, SessionError, SessionStore, SessionView, StoreConfig};
