//! AIG optimization: structural hashing, the four optimization passes
//! (balance, rewrite, refactor, resub) with their `-l` / `-z` flags, the
//! 16-entry command pool and recipe execution.

mod balance;
mod passes;
pub(crate) mod saig;
pub(crate) mod synth;

pub use saig::{strash, Saig};

use crate::error::{Error, Result};
use crate::ir::{Circuit, LogicType};
use std::fmt;

/// Number of commands in a standard recipe.
pub const RECIPE_LENGTH: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PassKind {
    Balance,
    Rewrite,
    Refactor,
    Resub,
}

impl PassKind {
    pub fn name(self) -> &'static str {
        match self {
            PassKind::Balance => "balance",
            PassKind::Rewrite => "rewrite",
            PassKind::Refactor => "refactor",
            PassKind::Resub => "resub",
        }
    }
}

/// One optimization command. `preserve_level` is `-l` (reject
/// replacements that increase the node's level), `zero_gain` is `-z`
/// (accept zero-gain replacements). `balance` carries no flags.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Command {
    pub kind: PassKind,
    pub preserve_level: bool,
    pub zero_gain: bool,
}

impl Command {
    pub fn new(kind: PassKind, preserve_level: bool, zero_gain: bool) -> Command {
        Command {
            kind,
            preserve_level,
            zero_gain,
        }
    }

    pub fn parse(line: &str) -> Result<Command> {
        let mut tokens = line.split_whitespace();
        let head = tokens
            .next()
            .ok_or_else(|| Error::format("empty command"))?;
        let kind = match head {
            "balance" => PassKind::Balance,
            "rewrite" => PassKind::Rewrite,
            "refactor" => PassKind::Refactor,
            "resub" => PassKind::Resub,
            other => return Err(Error::format(format!("unknown command `{other}`"))),
        };
        let mut preserve_level = false;
        let mut zero_gain = false;
        for t in tokens {
            match t {
                "-l" if !preserve_level => preserve_level = true,
                "-z" if !zero_gain => zero_gain = true,
                other => {
                    return Err(Error::format(format!(
                        "unexpected token `{other}` after `{head}`"
                    )))
                }
            }
        }
        if kind == PassKind::Balance && (preserve_level || zero_gain) {
            return Err(Error::format("balance takes no flags"));
        }
        Ok(Command {
            kind,
            preserve_level,
            zero_gain,
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if self.preserve_level {
            f.write_str(" -l")?;
        }
        if self.zero_gain {
            f.write_str(" -z")?;
        }
        Ok(())
    }
}

/// The 16-entry command pool: `balance` appears four times so that each
/// of the four command kinds is drawn with probability 1/4; the other
/// kinds contribute their four flag variants each.
pub fn command_pool() -> Vec<Command> {
    let mut pool = Vec::with_capacity(16);
    for _ in 0..4 {
        pool.push(Command::new(PassKind::Balance, false, false));
    }
    for kind in [PassKind::Rewrite, PassKind::Refactor, PassKind::Resub] {
        for (l, z) in [(false, false), (true, false), (false, true), (true, true)] {
            pool.push(Command::new(kind, l, z));
        }
    }
    pool
}

/// An ordered optimization sequence drawn from the command pool.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Recipe {
    pub id: usize,
    pub commands: Vec<Command>,
}

impl Recipe {
    pub fn new(id: usize, commands: Vec<Command>) -> Recipe {
        Recipe { id, commands }
    }
}

fn require_aig(c: &Circuit) -> Result<()> {
    if c.logic_type != LogicType::Aig {
        return Err(Error::usage(format!(
            "pass requires an AIG input, got {}",
            c.logic_type
        )));
    }
    Ok(())
}

/// Depth-minimizing reassociation of maximal AND trees.
pub fn balance(c: &Circuit) -> Result<Circuit> {
    require_aig(c)?;
    balance::run(c)
}

/// Without `-z` a pass must never grow the network. Gains are counted
/// in AND nodes, while the explicit-NOT form can in rare cases trade an
/// AND for more inverters, so the global invariant is enforced by
/// falling back to the input.
fn guard(before: &Circuit, after: Circuit, zero_gain: bool) -> Result<Circuit> {
    if !zero_gain && after.len() > before.len() {
        return strash(before);
    }
    Ok(after)
}

/// Cut-based local resynthesis (4-feasible cuts, Shannon resynthesis
/// with node reuse).
pub fn rewrite(c: &Circuit, preserve_level: bool, zero_gain: bool) -> Result<Circuit> {
    require_aig(c)?;
    guard(c, passes::rewrite(c, preserve_level, zero_gain)?, zero_gain)
}

/// MFFC cone collapsing and resynthesis.
pub fn refactor(c: &Circuit, preserve_level: bool, zero_gain: bool) -> Result<Circuit> {
    require_aig(c)?;
    guard(c, passes::refactor(c, preserve_level, zero_gain)?, zero_gain)
}

/// Windowed 0-/1-resubstitution.
pub fn resub(c: &Circuit, preserve_level: bool, zero_gain: bool) -> Result<Circuit> {
    require_aig(c)?;
    guard(c, passes::resub(c, preserve_level, zero_gain)?, zero_gain)
}

pub fn run_command(c: &Circuit, cmd: Command) -> Result<Circuit> {
    match cmd.kind {
        PassKind::Balance => balance(c),
        PassKind::Rewrite => rewrite(c, cmd.preserve_level, cmd.zero_gain),
        PassKind::Refactor => refactor(c, cmd.preserve_level, cmd.zero_gain),
        PassKind::Resub => resub(c, cmd.preserve_level, cmd.zero_gain),
    }
}

/// Strash, then each command in order, re-strashing after every pass.
pub fn apply_recipe(c: &Circuit, recipe: &Recipe) -> Result<Circuit> {
    require_aig(c)?;
    let mut current = strash(c)?;
    for cmd in &recipe.commands {
        current = run_command(&current, *cmd)?;
        current = strash(&current)?;
    }
    current.name = c.name.clone();
    Ok(current)
}
