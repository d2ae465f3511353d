//! Structural Verilog writer and reader.
//!
//! The writer emits primitive gates as built-in instantiations
//! (not/buf/and/nand/or/nor/xor/xnor) and everything else as a
//! continuous assignment of the gate's canonical expression, tagged
//! with a machine-readable comment (`// MAJ3(a, b, c)`,
//! `// LUT(a, b) tt=0x... name=n5`). The reader is a tokenizer plus
//! recursive-descent parser over exactly this subset; the tag comments
//! let it rebuild the original gate types, and each tagged expression
//! is re-evaluated and checked against the gate function.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use crate::tt;
use std::collections::{HashMap, HashSet};
use std::io::Write;

// ---------------------------------------------------------------- write

fn builtin(gate: GateType) -> Option<&'static str> {
    use GateType::*;
    Some(match gate {
        Not => "not",
        Buffer => "buf",
        And2 => "and",
        Nand2 => "nand",
        Or2 => "or",
        Nor2 => "nor",
        Xor2 => "xor",
        Xnor2 => "xnor",
        _ => return None,
    })
}

fn complex_expr(gate: GateType, p: &[String]) -> Option<String> {
    use GateType::*;
    let (a, b, c) = (&p[0], &p[1], &p[2]);
    Some(match gate {
        Maj3 => format!("({a} & {b}) | ({a} & {c}) | ({b} & {c})"),
        Mux21 => format!("(~{c} & {a}) | ({c} & {b})"),
        Nmux21 => format!("({c} & {a}) | (~{c} & {b})"),
        Aoi21 => format!("~(({a} & {b}) | {c})"),
        Oai21 => format!("~(({a} | {b}) & {c})"),
        Nand3 => format!("~({a} & {b} & {c})"),
        Nor3 => format!("~({a} | {b} | {c})"),
        _ => return None,
    })
}

/// Sum-of-products expression of an arbitrary truth table.
fn sop_expr(table: u64, pins: &[String]) -> String {
    let k = pins.len();
    let size = 1usize << k;
    let mask = if k >= 6 { u64::MAX } else { (1u64 << size) - 1 };
    if table & mask == 0 {
        return "1'b0".to_string();
    }
    if table & mask == mask {
        return "1'b1".to_string();
    }
    let mut terms = Vec::new();
    for j in 0..size {
        if (table >> j) & 1 == 1 {
            let lits: Vec<String> = (0..k)
                .map(|v| {
                    if (j >> v) & 1 == 1 {
                        pins[v].clone()
                    } else {
                        format!("~{}", pins[v])
                    }
                })
                .collect();
            terms.push(format!("({})", lits.join(" & ")));
        }
    }
    terms.join(" | ")
}

fn sanitize(name: &str) -> String {
    let mut out = String::new();
    for (i, ch) in name.chars().enumerate() {
        if ch.is_ascii_alphanumeric() || ch == '_' || ch == '$' {
            if i == 0 && ch.is_ascii_digit() {
                out.push('_');
            }
            out.push(ch);
        } else {
            out.push('_');
        }
    }
    if out.is_empty() {
        out.push('_');
    }
    out
}

const KEYWORDS: [&str; 16] = [
    "module", "endmodule", "input", "output", "wire", "assign", "not", "buf", "and", "nand",
    "or", "nor", "xor", "xnor", "always", "reg",
];

pub fn write_verilog(c: &Circuit, sink: &mut dyn Write) -> Result<()> {
    let violations = c.validate();
    if let Some(v) = violations.first() {
        return Err(Error::structure(format!("refusing to write: {v}")));
    }
    let order = c.topo_order()?;
    // assign a unique legal identifier to every node
    let mut used: HashSet<String> = KEYWORDS.iter().map(|s| s.to_string()).collect();
    let mut wire: HashMap<u32, String> = HashMap::new();
    for (i, node) in c.nodes() {
        let base = match node.gate {
            GateType::Pi | GateType::Po => sanitize(&node.name),
            _ => format!("w{i}"),
        };
        let mut name = base.clone();
        let mut k = 0;
        while !used.insert(name.clone()) {
            k += 1;
            name = format!("{base}_{k}");
        }
        wire.insert(i, name);
    }
    let mut out = String::new();
    let ports: Vec<String> = c
        .pis()
        .iter()
        .chain(c.pos().iter())
        .map(|&i| wire[&i].clone())
        .collect();
    out.push_str(&format!(
        "module {} ({});\n",
        sanitize(&c.name),
        ports.join(", ")
    ));
    for &i in c.pis() {
        out.push_str(&format!("  input {};\n", wire[&i]));
    }
    for &i in c.pos() {
        out.push_str(&format!("  output {};\n", wire[&i]));
    }
    for &i in &order {
        let gate = c.node(i).gate;
        if !matches!(gate, GateType::Pi | GateType::Po) {
            out.push_str(&format!("  wire {};\n", wire[&i]));
        }
    }
    for &i in &order {
        let node = c.node(i);
        let pins: Vec<String> = node.fanins.iter().map(|f| wire[f].clone()).collect();
        match node.gate {
            GateType::Pi | GateType::Po => {}
            GateType::Const0 => {
                out.push_str(&format!("  assign {} = 1'b0;\n", wire[&i]));
            }
            GateType::Const1 => {
                out.push_str(&format!("  assign {} = 1'b1;\n", wire[&i]));
            }
            g if builtin(g).is_some() => {
                out.push_str(&format!(
                    "  {} g{i} ({}, {});\n",
                    builtin(g).unwrap(),
                    wire[&i],
                    pins.join(", ")
                ));
            }
            GateType::Lut | GateType::Cell => {
                out.push_str(&format!(
                    "  assign {} = {}; // {}({}) tt=0x{:016x} name={}\n",
                    wire[&i],
                    sop_expr(node.tt, &pins),
                    node.gate.name(),
                    pins.join(", "),
                    node.tt,
                    node.name
                ));
            }
            g => {
                out.push_str(&format!(
                    "  assign {} = {}; // {}({})\n",
                    wire[&i],
                    complex_expr(g, &pins).unwrap(),
                    g.name(),
                    pins.join(", ")
                ));
            }
        }
    }
    for &p in c.pos() {
        let f = c.node(p).fanins[0];
        out.push_str(&format!("  assign {} = {};\n", wire[&p], wire[&f]));
    }
    out.push_str("endmodule\n");
    sink.write_all(out.as_bytes())?;
    Ok(())
}

// ----------------------------------------------------------------- read

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Sym(char),
    Const(bool),
    Comment(String),
}

struct Lexer {
    toks: Vec<(Tok, usize)>, // token, line
    pos: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Lexer> {
        let mut toks = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let mut rest = line;
            loop {
                rest = rest.trim_start();
                if rest.is_empty() {
                    break;
                }
                if let Some(comment) = rest.strip_prefix("//") {
                    toks.push((Tok::Comment(comment.trim().to_string()), line_no));
                    break;
                }
                let ch = rest.chars().next().unwrap();
                if ch.is_ascii_alphabetic() || ch == '_' || ch == '\\' || ch == '$' {
                    let end = rest
                        .char_indices()
                        .find(|(_, c)| {
                            !(c.is_ascii_alphanumeric() || matches!(c, '_' | '$' | '\\'))
                        })
                        .map(|(i, _)| i)
                        .unwrap_or(rest.len());
                    let word = &rest[..end];
                    if UNSUPPORTED.contains(&word) {
                        return Err(Error::unsupported(format!(
                            "line {line_no}: behavioral construct `{word}` is not supported"
                        )));
                    }
                    toks.push((Tok::Ident(word.to_string()), line_no));
                    rest = &rest[end..];
                } else if ch.is_ascii_digit() {
                    if let Some(r) = rest.strip_prefix("1'b0") {
                        toks.push((Tok::Const(false), line_no));
                        rest = r;
                    } else if let Some(r) = rest.strip_prefix("1'b1") {
                        toks.push((Tok::Const(true), line_no));
                        rest = r;
                    } else {
                        return Err(Error::format(format!(
                            "line {line_no}: unexpected number in `{rest}`"
                        )));
                    }
                } else if "();,=&|^~".contains(ch) {
                    toks.push((Tok::Sym(ch), line_no));
                    rest = &rest[ch.len_utf8()..];
                } else {
                    return Err(Error::format(format!(
                        "line {line_no}: unexpected character `{ch}`"
                    )));
                }
            }
        }
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(_, l)| *l)
            .unwrap_or(0)
    }

    fn next_tok(&mut self) -> Result<Tok> {
        let t = self
            .toks
            .get(self.pos)
            .map(|(t, _)| t.clone())
            .ok_or_else(|| Error::format("unexpected end of Verilog input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        let line = self.line();
        match self.next_tok()? {
            Tok::Sym(s) if s == c => Ok(()),
            other => Err(Error::format(format!(
                "line {line}: expected `{c}`, found {other:?}"
            ))),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        let line = self.line();
        match self.next_tok()? {
            Tok::Ident(s) => Ok(s),
            other => Err(Error::format(format!(
                "line {line}: expected identifier, found {other:?}"
            ))),
        }
    }

    fn eat_comment(&mut self) -> Option<String> {
        if let Some(Tok::Comment(c)) = self.peek() {
            let c = c.clone();
            self.pos += 1;
            Some(c)
        } else {
            None
        }
    }
}

/// An expression over wire names.
#[derive(Debug, Clone)]
enum Expr {
    Var(String),
    Const(bool),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, env: &HashMap<String, u64>) -> Result<u64> {
        Ok(match self {
            Expr::Var(v) => *env
                .get(v)
                .ok_or_else(|| Error::format(format!("unknown signal `{v}` in expression")))?,
            Expr::Const(b) => {
                if *b {
                    u64::MAX
                } else {
                    0
                }
            }
            Expr::Not(e) => !e.eval(env)?,
            Expr::And(a, b) => a.eval(env)? & b.eval(env)?,
            Expr::Or(a, b) => a.eval(env)? | b.eval(env)?,
            Expr::Xor(a, b) => a.eval(env)? ^ b.eval(env)?,
        })
    }
}

fn parse_expr(lx: &mut Lexer) -> Result<Expr> {
    let mut e = parse_xor(lx)?;
    while lx.peek() == Some(&Tok::Sym('|')) {
        lx.pos += 1;
        e = Expr::Or(Box::new(e), Box::new(parse_xor(lx)?));
    }
    Ok(e)
}

fn parse_xor(lx: &mut Lexer) -> Result<Expr> {
    let mut e = parse_and(lx)?;
    while lx.peek() == Some(&Tok::Sym('^')) {
        lx.pos += 1;
        e = Expr::Xor(Box::new(e), Box::new(parse_and(lx)?));
    }
    Ok(e)
}

fn parse_and(lx: &mut Lexer) -> Result<Expr> {
    let mut e = parse_atom(lx)?;
    while lx.peek() == Some(&Tok::Sym('&')) {
        lx.pos += 1;
        e = Expr::And(Box::new(e), Box::new(parse_atom(lx)?));
    }
    Ok(e)
}

fn parse_atom(lx: &mut Lexer) -> Result<Expr> {
    let line = lx.line();
    match lx.next_tok()? {
        Tok::Sym('~') => Ok(Expr::Not(Box::new(parse_atom(lx)?))),
        Tok::Sym('(') => {
            let e = parse_expr(lx)?;
            lx.expect_sym(')')?;
            Ok(e)
        }
        Tok::Ident(v) => Ok(Expr::Var(v)),
        Tok::Const(b) => Ok(Expr::Const(b)),
        other => Err(Error::format(format!(
            "line {line}: unexpected token {other:?} in expression"
        ))),
    }
}

struct Stmt {
    target: String,
    kind: StmtKind,
    line: usize,
}

enum StmtKind {
    Gate(GateType, Vec<String>),
    /// assign: expression plus optional tag comment
    Assign(Expr, Option<Tag>),
}

struct Tag {
    gate: GateType,
    pins: Vec<String>,
    tt: Option<u64>,
    name: Option<String>,
}

fn parse_tag(comment: &str) -> Option<Tag> {
    let open = comment.find('(')?;
    let gate = GateType::from_name(comment[..open].trim())?;
    let close = comment.find(')')?;
    let pins: Vec<String> = comment[open + 1..close]
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let mut tt = None;
    let mut name = None;
    let rest = comment[close + 1..].trim();
    if let Some(i) = rest.find("tt=0x") {
        let hex: String = rest[i + 5..]
            .chars()
            .take_while(|c| c.is_ascii_hexdigit())
            .collect();
        tt = u64::from_str_radix(&hex, 16).ok();
    }
    if let Some(i) = rest.find("name=") {
        name = Some(rest[i + 5..].to_string());
    }
    Some(Tag {
        gate,
        pins,
        tt,
        name,
    })
}

const UNSUPPORTED: [&str; 10] = [
    "always", "reg", "initial", "if", "case", "for", "parameter", "function", "task", "generate",
];

pub fn read_verilog(source: &[u8]) -> Result<Circuit> {
    let text = std::str::from_utf8(source)
        .map_err(|_| Error::format("Verilog is not valid UTF-8"))?;
    let mut lx = Lexer::new(text)?;

    // module header
    loop {
        match lx.peek() {
            Some(Tok::Comment(_)) => {
                lx.pos += 1;
            }
            _ => break,
        }
    }
    let line = lx.line();
    match lx.next_tok()? {
        Tok::Ident(k) if k == "module" => {}
        _ => return Err(Error::format(format!("line {line}: expected `module`"))),
    }
    let module_name = lx.expect_ident()?;
    lx.expect_sym('(')?;
    loop {
        match lx.next_tok()? {
            Tok::Sym(')') => break,
            Tok::Ident(_) | Tok::Sym(',') => {}
            other => {
                return Err(Error::format(format!(
                    "unexpected token {other:?} in port list"
                )))
            }
        }
    }
    lx.expect_sym(';')?;

    let mut inputs: Vec<String> = Vec::new();
    let mut outputs: Vec<String> = Vec::new();
    let mut stmts: Vec<Stmt> = Vec::new();

    loop {
        let line = lx.line();
        let tok = lx.next_tok()?;
        let word = match &tok {
            Tok::Ident(w) => w.clone(),
            Tok::Comment(_) => continue,
            other => {
                return Err(Error::format(format!(
                    "line {line}: unexpected token {other:?}"
                )))
            }
        };
        if UNSUPPORTED.contains(&word.as_str()) {
            return Err(Error::unsupported(format!(
                "line {line}: behavioral construct `{word}` is not supported"
            )));
        }
        match word.as_str() {
            "endmodule" => break,
            "input" | "output" | "wire" => {
                loop {
                    let name = lx.expect_ident()?;
                    match word.as_str() {
                        "input" => inputs.push(name),
                        "output" => outputs.push(name),
                        _ => {}
                    }
                    match lx.next_tok()? {
                        Tok::Sym(',') => continue,
                        Tok::Sym(';') => break,
                        other => {
                            return Err(Error::format(format!(
                                "line {line}: unexpected token {other:?} in declaration"
                            )))
                        }
                    }
                }
            }
            "assign" => {
                let target = lx.expect_ident()?;
                lx.expect_sym('=')?;
                let expr = parse_expr(&mut lx)?;
                lx.expect_sym(';')?;
                let tag = lx.eat_comment().and_then(|c| parse_tag(&c));
                stmts.push(Stmt {
                    target,
                    kind: StmtKind::Assign(expr, tag),
                    line,
                });
            }
            prim => {
                let gate = match prim {
                    "not" => GateType::Not,
                    "buf" => GateType::Buffer,
                    "and" => GateType::And2,
                    "nand" => GateType::Nand2,
                    "or" => GateType::Or2,
                    "nor" => GateType::Nor2,
                    "xor" => GateType::Xor2,
                    "xnor" => GateType::Xnor2,
                    other => {
                        return Err(Error::format(format!(
                            "line {line}: unknown statement `{other}`"
                        )))
                    }
                };
                // primitive: NAME INSTANCE ( out, in... ) ;
                let _instance = lx.expect_ident()?;
                lx.expect_sym('(')?;
                let mut pins = Vec::new();
                loop {
                    pins.push(lx.expect_ident()?);
                    match lx.next_tok()? {
                        Tok::Sym(',') => continue,
                        Tok::Sym(')') => break,
                        other => {
                            return Err(Error::format(format!(
                                "line {line}: unexpected token {other:?} in pin list"
                            )))
                        }
                    }
                }
                lx.expect_sym(';')?;
                if pins.len() != gate.fixed_arity().unwrap() + 1 {
                    return Err(Error::format(format!(
                        "line {line}: {prim} expects {} pins, got {}",
                        gate.fixed_arity().unwrap() + 1,
                        pins.len()
                    )));
                }
                let target = pins.remove(0);
                stmts.push(Stmt {
                    target,
                    kind: StmtKind::Gate(gate, pins),
                    line,
                });
            }
        }
    }

    build_circuit(module_name, inputs, outputs, stmts)
}

fn build_circuit(
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    stmts: Vec<Stmt>,
) -> Result<Circuit> {
    let mut c = Circuit::new(LogicType::Gtg, name);
    let mut signal: HashMap<String, u32> = HashMap::new();
    for pi in &inputs {
        let idx = c.add_pi(pi.clone());
        signal.insert(pi.clone(), idx);
    }
    let by_target: HashMap<String, usize> = stmts
        .iter()
        .enumerate()
        .map(|(i, s)| (s.target.clone(), i))
        .collect();
    let output_set: HashSet<&String> = outputs.iter().collect();

    // resolve signals on demand, depth first
    fn resolve(
        sig: &str,
        c: &mut Circuit,
        signal: &mut HashMap<String, u32>,
        stmts: &[Stmt],
        by_target: &HashMap<String, usize>,
        output_set: &HashSet<&String>,
        visiting: &mut HashSet<String>,
    ) -> Result<u32> {
        if let Some(&idx) = signal.get(sig) {
            return Ok(idx);
        }
        if !visiting.insert(sig.to_string()) {
            return Err(Error::structure(format!(
                "combinational cycle through `{sig}`"
            )));
        }
        let &si = by_target
            .get(sig)
            .ok_or_else(|| Error::format(format!("undriven signal `{sig}`")))?;
        let stmt = &stmts[si];
        let idx = match &stmt.kind {
            StmtKind::Gate(gate, pins) => {
                let mut fanins = Vec::new();
                for p in pins {
                    fanins.push(resolve(p, c, signal, stmts, by_target, output_set, visiting)?);
                }
                c.add_gate(*gate, fanins, sig.to_string())?
            }
            StmtKind::Assign(expr, Some(tag)) => {
                let mut fanins = Vec::new();
                for p in &tag.pins {
                    fanins.push(resolve(p, c, signal, stmts, by_target, output_set, visiting)?);
                }
                // re-evaluate the expression over the tag's pin order and
                // check it against the declared function
                let env: HashMap<String, u64> = tag
                    .pins
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.clone(), tt::VAR_MASKS[i]))
                    .collect();
                let actual = expr.eval(&env)?;
                let declared = match tag.gate.canonical_tt() {
                    Some(t) => t,
                    None => tag.tt.ok_or_else(|| {
                        Error::format(format!(
                            "line {}: {} tag requires tt=",
                            stmt.line,
                            tag.gate.name()
                        ))
                    })?,
                };
                let k = tag.pins.len();
                if tt::tile(actual, k.max(1)) != tt::tile(declared, k.max(1)) {
                    return Err(Error::format(format!(
                        "line {}: expression disagrees with {} tag",
                        stmt.line,
                        tag.gate.name()
                    )));
                }
                let node_name = tag.name.clone().unwrap_or_else(|| sig.to_string());
                match tag.gate {
                    GateType::Lut => c.add_lut(fanins, declared, node_name)?,
                    GateType::Cell => c.add_cell(fanins, declared, node_name)?,
                    g => c.add_gate(g, fanins, node_name)?,
                }
            }
            StmtKind::Assign(expr, None) => match expr {
                Expr::Const(b) => c.add_const(*b),
                Expr::Var(v) => {
                    let src =
                        resolve(v, c, signal, stmts, by_target, output_set, visiting)?;
                    if output_set.contains(&sig.to_string()) {
                        src // plain output connection
                    } else {
                        c.add_gate(GateType::Buffer, vec![src], sig.to_string())?
                    }
                }
                _ => {
                    return Err(Error::format(format!(
                        "line {}: untagged complex assignment to `{sig}`",
                        stmt.line
                    )))
                }
            },
        };
        visiting.remove(sig);
        signal.insert(sig.to_string(), idx);
        Ok(idx)
    }

    let mut visiting = HashSet::new();
    for po in &outputs {
        let driver = resolve(
            po,
            &mut c,
            &mut signal,
            &stmts,
            &by_target,
            &output_set,
            &mut visiting,
        )?;
        c.add_po(driver, po.clone());
    }

    c.logic_type = infer_logic_type(&c)?;
    Ok(c)
}

fn infer_logic_type(c: &Circuit) -> Result<LogicType> {
    use LogicType::*;
    for t in [Aig, Oig, Xag, Mig, Primary, Gtg, FpgaNetlist, AsicNetlist] {
        if c.nodes().all(|(_, n)| t.allows(n.gate)) {
            return Ok(t);
        }
    }
    Err(Error::format(
        "gate mix does not fit any supported logic type",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;
    use crate::sim::check_equivalence;

    fn round_trip(c: &Circuit) -> Circuit {
        let mut buf = Vec::new();
        write_verilog(c, &mut buf).unwrap();
        read_verilog(&buf).unwrap()
    }

    #[test]
    fn and2_emits_builtin_and_reparses() {
        let mut c = Circuit::new(LogicType::Aig, "and2");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let g = c.add_gate(GateType::And2, vec![a, b], "g").unwrap();
        c.add_po(g, "y");
        let mut buf = Vec::new();
        write_verilog(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("and g2 (w2, a, b);"), "{text}");
        let back = read_verilog(text.as_bytes()).unwrap();
        assert_eq!(back.logic_type, LogicType::Aig);
        assert!(check_equivalence(&c, &back, 16).unwrap().holds());
    }

    #[test]
    fn maj3_uses_canonical_expression() {
        let mut c = Circuit::new(LogicType::Mig, "m");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let d = c.add_pi("c");
        let g = c.add_gate(GateType::Maj3, vec![a, b, d], "g").unwrap();
        c.add_po(g, "y");
        let mut buf = Vec::new();
        write_verilog(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(
            text.contains("(a & b) | (a & c) | (b & c)"),
            "{text}"
        );
        let back = read_verilog(text.as_bytes()).unwrap();
        assert_eq!(back.logic_type, LogicType::Mig);
        assert!(check_equivalence(&c, &back, 16).unwrap().holds());
    }

    #[test]
    fn always_block_is_unsupported() {
        let src = "module m (a, y);\n  input a;\n  output y;\n  always @(a) y = a;\nendmodule\n";
        let err = read_verilog(src.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)), "{err}");
        assert!(err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn random_aigs_round_trip_equivalent() {
        for seed in [21u64, 22, 23] {
            let c = random_aig(seed, 5, 40, 3);
            let back = round_trip(&c);
            assert!(
                check_equivalence(&c, &back, 128).unwrap().holds(),
                "seed={seed}"
            );
        }
    }

    #[test]
    fn luts_and_cells_round_trip() {
        let mut c = Circuit::new(LogicType::FpgaNetlist, "lutnet");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let d = c.add_pi("c");
        let l = c.add_lut(vec![a, b, d], 0xE8, "l0").unwrap();
        c.add_po(l, "y");
        let back = round_trip(&c);
        assert_eq!(back.logic_type, LogicType::FpgaNetlist);
        assert_eq!(back.stats().count(GateType::Lut), 1);
        assert!(check_equivalence(&c, &back, 16).unwrap().holds());
    }
}
