use std::process::ExitCode;
use std::time::Duration;

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// A completed command: its echoed input, structured result and text form.
pub struct Report {
    pub input: Value,
    pub result: Value,
    pub text: String,
    /// Answered, but in the negative (exit 1).
    pub negative: bool,
}

impl Report {
    pub fn positive(input: Value, result: Value, text: impl Into<String>) -> Self {
        Report {
            input,
            result,
            text: text.into(),
            negative: false,
        }
    }

    pub fn negative(input: Value, result: Value, text: impl Into<String>) -> Self {
        Report {
            negative: true,
            ..Report::positive(input, result, text)
        }
    }

    pub fn emit(self, command: &str, json: bool, elapsed: Option<Duration>) -> ExitCode {
        if json {
            let envelope = json!({
                "schemaVersion": SCHEMA_VERSION,
                "command": command,
                "input": self.input,
                "result": self.result,
                "durationMs": elapsed.map_or(0, |d| d.as_millis() as u64),
            });
            println!("{envelope}");
        } else {
            let text = self.text.trim_end_matches('\n');
            println!("{text}");
        }
        ExitCode::from(if self.negative { 1 } else { 0 })
    }
}

/// Malformed input: reported on stderr, exit 2.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    /// Offending input and byte position, rendered with a caret.
    pub at: Option<(String, usize)>,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            at: None,
        }
    }

    pub fn at(message: impl Into<String>, input: &str, position: usize) -> Self {
        Failure {
            message: message.into(),
            at: Some((input.to_string(), position)),
        }
    }

    pub fn emit(self, command: &str) -> ExitCode {
        eprintln!("starmap {command}: {}", self.message);
        if let Some((input, position)) = &self.at {
            let column = input
                .get(..*position)
                .map_or(*position, |p| p.chars().count());
            eprintln!("  {input}");
            eprintln!("  {}^", " ".repeat(column));
        }
        ExitCode::from(2)
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::new(e.to_string())
    }
}
