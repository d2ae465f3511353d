//! Recipe files: one optimization command per line.

use crate::error::Result;
use crate::opt::{Command, Recipe};
use std::io::Write;

pub fn write_recipe(r: &Recipe, sink: &mut dyn Write) -> Result<()> {
    let mut out = String::new();
    for cmd in &r.commands {
        out.push_str(&cmd.to_string());
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(())
}

/// Parses a recipe; blank lines and `#` comment lines are skipped. The
/// id is not part of the file format (it lives in the file name), so
/// callers attach it afterwards.
pub fn read_recipe(source: &[u8]) -> Result<Recipe> {
    let text = std::str::from_utf8(source)
        .map_err(|_| crate::error::Error::format("recipe is not valid UTF-8"))?;
    let mut commands = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        commands.push(Command::parse(line)?);
    }
    Ok(Recipe::new(0, commands))
}
