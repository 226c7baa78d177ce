//! Line-oriented terminal conversation.

use std::io::{BufRead, Write};

use crs_core::dialog::DialogError;
use crs_core::{Engine, Mode, Session};

use crate::store::{EventStore, StoreError};

pub const QUIT: &str = "/quit";

#[derive(Debug, thiserror::Error)]
pub enum ChatError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("terminal: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Dialog(#[from] DialogError),
}

pub fn banner(session: &Session) -> String {
    format!("[{} | {} commands]", session.state.tag(), session.command_count)
}

/// Run one conversation until `/quit`, end of input or a booking. Every
/// turn is appended to the transcript before it is printed.
#[allow(clippy::too_many_arguments)]
pub fn run(
    engine: &Engine,
    store: &EventStore,
    id: &str,
    mode: Mode,
    seed: u64,
    clock: &dyn Fn() -> u64,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<Session, ChatError> {
    let mut session = engine.start_session(id, mode, seed, clock());
    store.append(id, &session.event_log, false)?;
    for r in &session.last_responses {
        writeln!(out, "{}", r.text)?;
    }
    writeln!(out, "{}", banner(&session))?;
    let mut line = String::new();
    while !session.is_terminal() {
        write!(out, "> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            break;
        }
        let text = line.trim();
        if text == QUIT {
            break;
        }
        if text.is_empty() {
            continue;
        }
        let written = session.event_log.len();
        let responses = engine.step(&mut session, text, clock())?;
        store.append(id, &session.event_log[written..], session.is_terminal())?;
        for r in &responses {
            writeln!(out, "{}", r.text)?;
        }
        writeln!(out, "{}", banner(&session))?;
    }
    out.flush()?;
    Ok(session)
}
