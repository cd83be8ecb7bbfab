//! Timed plan files: one `<time>: (<action> <args...>) [<duration>]` per
//! line, `;` comments, blank lines ignored.

use super::sexp::{LineIndex, ParseError};
use crate::model::{Plan, PlanStep, Rational};

pub fn parse_plan(text: &str) -> Result<Plan, ParseError> {
    let index = LineIndex::new(text);
    let mut steps = Vec::new();
    let mut line_start = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.split(';').next().unwrap_or("").trim_end_matches(['\n', '\r']);
        if !line.trim().is_empty() {
            steps.push(parse_line(line, line_start, &index)?);
        }
        line_start += raw.len();
    }
    Ok(Plan::new(steps))
}

struct Cursor<'a, 'i> {
    line: &'a str,
    pos: usize,
    base: usize,
    index: &'a LineIndex<'i>,
}

impl<'a> Cursor<'a, '_> {
    fn skip_ws(&mut self) {
        let rest = &self.line[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn error(&self, at: usize, len: usize, expected: &str, found: &str) -> ParseError {
        ParseError::new(self.index.span(self.base + at, len), expected, found)
    }

    fn found_here(&self) -> String {
        match self.line[self.pos..].chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of line".to_string(),
        }
    }

    fn expect_char(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.line[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(self.pos, 1, &format!("`{c}`"), &self.found_here()))
        }
    }

    /// Text up to (not including) `stop`, which must occur on the line.
    fn until(&mut self, stop: char, expected: &str) -> Result<(usize, &'a str), ParseError> {
        let line = self.line;
        let start = self.pos;
        match line[start..].find(stop) {
            Some(i) => {
                self.pos = start + i;
                Ok((start, &line[start..start + i]))
            }
            None => Err(self.error(self.line.len(), 0, expected, "end of line")),
        }
    }
}

fn parse_rational(c: &Cursor, at: usize, text: &str, what: &str) -> Result<Rational, ParseError> {
    let trimmed = text.trim();
    let lead = text.len() - text.trim_start().len();
    trimmed.parse::<Rational>().map_err(|_| c.error(at + lead, trimmed.len(), what, &format!("`{trimmed}`")))
}

fn parse_line(line: &str, base: usize, index: &LineIndex) -> Result<PlanStep, ParseError> {
    let mut c = Cursor { line, pos: 0, base, index };
    c.skip_ws();
    let (at, time_text) = c.until(':', "`:` after the start time")?;
    let time = parse_rational(&c, at, time_text, "a start time")?;
    if time.is_negative() {
        return Err(c.error(at, time_text.len(), "a non-negative start time", &format!("`{}`", time_text.trim())));
    }
    c.pos += 1;
    c.expect_char('(')?;
    let (at, inside) = c.until(')', "`)`")?;
    if let Some(bad) = inside.find(['(', '[', ']']) {
        return Err(c.error(at + bad, 1, "an action name or argument", &format!("`{}`", &inside[bad..bad + 1])));
    }
    let mut words = inside.split_whitespace().map(str::to_lowercase);
    let Some(action) = words.next() else {
        return Err(c.error(at, inside.len(), "an action name", "`()`"));
    };
    let args: Vec<String> = words.collect();
    c.pos += 1;
    c.expect_char('[')?;
    let (at, dur_text) = c.until(']', "`]`")?;
    let duration = parse_rational(&c, at, dur_text, "a duration")?;
    if !duration.is_positive() {
        return Err(c.error(at, dur_text.len(), "a positive duration", &format!("`{}`", dur_text.trim())));
    }
    c.pos += 1;
    c.skip_ws();
    if c.pos < line.len() {
        return Err(c.error(c.pos, line.len() - c.pos, "end of line", &c.found_here()));
    }
    Ok(PlanStep::new(time, action, args, duration))
}
