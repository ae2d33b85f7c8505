use std::io::IsTerminal;

/// A failure rendered as `ERROR <kind> <location> <message>`.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub location: String,
    pub message: String,
}

impl Failure {
    pub fn new(kind: &'static str, location: impl Into<String>, message: impl ToString) -> Self {
        Failure {
            kind,
            location: location.into(),
            message: message.to_string(),
        }
    }

    pub fn line(&self) -> String {
        let message = self
            .message
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        let location = if self.location.is_empty() {
            "-"
        } else {
            &self.location
        };
        format!(
            "{} {} {} {message}",
            paint("ERROR", RED),
            self.kind,
            location
        )
    }
}

pub const RED: &str = "31";
pub const GREEN: &str = "32";

/// Colour is off unless `GRETL_MINI_COLOR=1`; unset means "only on a terminal".
fn color_enabled() -> bool {
    match std::env::var("GRETL_MINI_COLOR").as_deref() {
        Ok("1") => true,
        Ok(_) => false,
        Err(_) => std::io::stderr().is_terminal() && std::io::stdout().is_terminal(),
    }
}

pub fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

pub fn error_line(f: &Failure) {
    eprintln!("{}", f.line());
}
