//! A tiny XML pull parser covering the subset this crate emits:
//! elements, attributes, character data and the five standard entities.
//! No namespaces, DTDs or CDATA.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Open {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    Close(String),
    Text(String),
}

pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_until(&mut self, pat: &str) -> Result<()> {
        match self.rest().find(pat) {
            Some(i) => {
                self.pos += i + pat.len();
                Ok(())
            }
            None => Err(Error::format(format!("unterminated construct, expected `{pat}`"))),
        }
    }

    pub fn next_event(&mut self) -> Result<Option<Event>> {
        loop {
            if self.pos >= self.src.len() {
                return Ok(None);
            }
            if !self.rest().starts_with('<') {
                let end = self.rest().find('<').unwrap_or(self.rest().len());
                let raw = &self.src[self.pos..self.pos + end];
                self.pos += end;
                if raw.trim().is_empty() {
                    continue; // inter-element whitespace
                }
                return Ok(Some(Event::Text(unescape(raw)?)));
            }
            if self.rest().starts_with("<?") {
                self.skip_until("?>")?;
                continue;
            }
            if self.rest().starts_with("<!--") {
                self.skip_until("-->")?;
                continue;
            }
            if self.rest().starts_with("<!") {
                self.skip_until(">")?;
                continue;
            }
            if self.rest().starts_with("</") {
                self.pos += 2;
                let name = self.read_name()?;
                self.skip_ws();
                self.expect('>')?;
                return Ok(Some(Event::Close(name)));
            }
            self.pos += 1;
            let name = self.read_name()?;
            let mut attrs = Vec::new();
            loop {
                self.skip_ws();
                if self.rest().starts_with("/>") {
                    self.pos += 2;
                    return Ok(Some(Event::Open {
                        name,
                        attrs,
                        self_closing: true,
                    }));
                }
                if self.rest().starts_with('>') {
                    self.pos += 1;
                    return Ok(Some(Event::Open {
                        name,
                        attrs,
                        self_closing: false,
                    }));
                }
                let key = self.read_name()?;
                self.skip_ws();
                self.expect('=')?;
                self.skip_ws();
                let quote = self
                    .rest()
                    .chars()
                    .next()
                    .filter(|&c| c == '"' || c == '\'')
                    .ok_or_else(|| Error::format("attribute value must be quoted"))?;
                self.pos += 1;
                let end = self
                    .rest()
                    .find(quote)
                    .ok_or_else(|| Error::format("unterminated attribute value"))?;
                let value = unescape(&self.src[self.pos..self.pos + end])?;
                self.pos += end + 1;
                attrs.push((key, value));
            }
        }
    }

    fn read_name(&mut self) -> Result<String> {
        let name: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
            .collect();
        if name.is_empty() {
            return Err(Error::format("expected XML name"));
        }
        self.pos += name.len();
        Ok(name)
    }

    fn skip_ws(&mut self) {
        let n = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_whitespace())
            .count();
        self.pos += n;
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.rest().starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::format(format!("expected `{c}` in XML")))
        }
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let end = rest
            .find(';')
            .ok_or_else(|| Error::format("unterminated XML entity"))?;
        let entity = &rest[1..end];
        match entity {
            "amp" => out.push('&'),
            "lt" => out.push('<'),
            "gt" => out.push('>'),
            "quot" => out.push('"'),
            "apos" => out.push('\''),
            _ => {
                let code = entity
                    .strip_prefix("#x")
                    .map(|h| u32::from_str_radix(h, 16))
                    .or_else(|| entity.strip_prefix('#').map(|d| d.parse()))
                    .and_then(|r| r.ok())
                    .and_then(char::from_u32)
                    .ok_or_else(|| Error::format(format!("unknown XML entity `&{entity};`")))?;
                out.push(code);
            }
        }
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_and_entities() {
        let mut p = Parser::new(
            "<?xml version=\"1.0\"?>\n<a x=\"1 &amp; 2\">\n  <b/>hi &lt;there&gt;</a>",
        );
        let Event::Open { name, attrs, .. } = p.next_event().unwrap().unwrap() else {
            panic!()
        };
        assert_eq!(name, "a");
        assert_eq!(attrs, vec![("x".into(), "1 & 2".into())]);
        assert!(matches!(
            p.next_event().unwrap().unwrap(),
            Event::Open { self_closing: true, .. }
        ));
        assert_eq!(
            p.next_event().unwrap().unwrap(),
            Event::Text("hi <there>".into())
        );
        assert_eq!(p.next_event().unwrap().unwrap(), Event::Close("a".into()));
        assert_eq!(p.next_event().unwrap(), None);
    }
}
