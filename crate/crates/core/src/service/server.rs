use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;

use super::protocol::handle_line;
use super::session::SessionStore;

/// Serves the session protocol on `listener`, one thread per connection,
/// until accepting fails.
pub fn serve(listener: TcpListener, store: Arc<SessionStore>) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let store = Arc::clone(&store);
        thread::spawn(move || {
            // a broken connection only ends that client
            let _ = handle_connection(stream, &store);
        });
    }
    Ok(())
}

fn handle_connection(stream: TcpStream, store: &SessionStore) -> io::Result<()> {
    let mut writer = stream.try_clone()?;
    for line in BufReader::new(stream).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = handle_line(store, &line);
        writer.write_all(response.as_bytes())?;
        writer.write_all(b"\n")?;
        writer.flush()?;
    }
    Ok(())
}
