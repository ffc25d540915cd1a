use std::io::IsTerminal;

/// Colors are used only on a terminal, and never when `NO_COLOR` is set to a non-empty value.
pub fn color_enabled(stream_is_terminal: bool) -> bool {
    let suppressed = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    stream_is_terminal && !suppressed
}

pub fn stdout_color() -> bool {
    color_enabled(std::io::stdout().is_terminal())
}

pub fn stderr_color() -> bool {
    color_enabled(std::io::stderr().is_terminal())
}

pub fn paint(text: &str, code: &str, on: bool) -> String {
    if on {
        format!("\x1b[{}m{}\x1b[0m", code, text)
    } else {
        text.to_string()
    }
}
