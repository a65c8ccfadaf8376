// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! A small OpenQASM 2 subset: register declarations, one- and two-qubit gate applications,
//! `measure` and `barrier`. Gate parameters are kept verbatim in the label.

use std::collections::HashMap;
use std::fmt::Write;

use crate::circuit::{CircuitDag, OpKind};
use crate::error::{Result, SabreError};

const ONE_QUBIT: &[&str] = &[
    "id", "x", "y", "z", "h", "s", "sdg", "t", "tdg", "sx", "sxdg", "rx", "ry", "rz", "u0", "u1",
    "u2", "u3", "u", "p", "U", "reset",
];
const TWO_QUBIT: &[&str] = &[
    "cx", "CX", "cy", "cz", "ch", "swap", "cp", "cu1", "crx", "cry", "crz", "cu3", "cu", "csx",
    "rxx", "ryy", "rzz", "rzx", "ecr", "iswap", "dcx",
];
const WIDE: &[&str] = &["ccx", "cswap", "rccx", "rc3x", "c3x", "c3sqrtx", "c4x"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real,
    Str,
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> SabreError {
    SabreError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    while i < bytes.len() {
        let c = bytes[i];
        let column = i - line_start + 1;
        let start = i;
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                line_start = i;
                continue;
            }
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                tokens.push(Token {
                    tok: Tok::Arrow,
                    line,
                    column,
                    start,
                    end: i,
                });
                continue;
            }
            b'"' => {
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\n' {
                        return Err(err(line, column, "unterminated string"));
                    }
                    i += 1;
                }
                if i == bytes.len() {
                    return Err(err(line, column, "unterminated string"));
                }
                i += 1;
                tokens.push(Token {
                    tok: Tok::Str,
                    line,
                    column,
                    start,
                    end: i,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let ident = text[start..i].to_string();
                tokens.push(Token {
                    tok: Tok::Ident(ident),
                    line,
                    column,
                    start,
                    end: i,
                });
                continue;
            }
            c if c.is_ascii_digit() || c == b'.' => {
                let mut real = false;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    real |= bytes[i] == b'.';
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    real = true;
                    i += 1;
                    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let tok = if real {
                    Tok::Real
                } else {
                    let value = text[start..i]
                        .parse()
                        .map_err(|_| err(line, column, "integer literal out of range"))?;
                    Tok::Int(value)
                };
                tokens.push(Token {
                    tok,
                    line,
                    column,
                    start,
                    end: i,
                });
                continue;
            }
            b';' | b',' | b'[' | b']' | b'(' | b')' | b'{' | b'}' | b'+' | b'-' | b'*' | b'/'
            | b'^' | b'=' => {
                i += 1;
                tokens.push(Token {
                    tok: Tok::Sym(c as char),
                    line,
                    column,
                    start,
                    end: i,
                });
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(line, column, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug)]
struct Arg {
    reg: String,
    index: Option<u64>,
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Stmt {
    Gate {
        name: String,
        label: String,
        args: Vec<Arg>,
        line: usize,
        column: usize,
    },
    Measure {
        qubit: Arg,
        clbit: Arg,
    },
    Barrier {
        args: Vec<Arg>,
    },
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eof_error(&self, what: &str) -> SabreError {
        let (line, column) = match self.tokens.last() {
            Some(t) => (t.line, t.column + (t.end - t.start)),
            None => (1, 1),
        };
        err(
            line,
            column,
            format!("unexpected end of input, expected {what}"),
        )
    }

    fn next(&mut self, what: &str) -> Result<Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof_error(what))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect_sym(&mut self, sym: char) -> Result<Token> {
        let tok = self.next(&format!("'{sym}'"))?;
        if tok.tok != Tok::Sym(sym) {
            return Err(err(tok.line, tok.column, format!("expected '{sym}'")));
        }
        Ok(tok)
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Token)> {
        let tok = self.next(what)?;
        match &tok.tok {
            Tok::Ident(s) => Ok((s.clone(), tok)),
            _ => Err(err(tok.line, tok.column, format!("expected {what}"))),
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        let tok = self.next("an integer")?;
        match tok.tok {
            Tok::Int(v) => Ok(v),
            _ => Err(err(tok.line, tok.column, "expected an integer")),
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        let (reg, tok) = self.expect_ident("a register operand")?;
        let index = if self.peek().map(|t| &t.tok) == Some(&Tok::Sym('[')) {
            self.pos += 1;
            let v = self.expect_int()?;
            self.expect_sym(']')?;
            Some(v)
        } else {
            None
        };
        Ok(Arg {
            reg,
            index,
            line: tok.line,
            column: tok.column,
        })
    }

    fn arg_list(&mut self) -> Result<Vec<Arg>> {
        let mut args = vec![self.arg()?];
        loop {
            let tok = self.next("',' or ';'")?;
            match tok.tok {
                Tok::Sym(',') => args.push(self.arg()?),
                Tok::Sym(';') => return Ok(args),
                _ => return Err(err(tok.line, tok.column, "expected ',' or ';'")),
            }
        }
    }

    /// Consume a balanced parenthesised parameter list and return its trimmed source text.
    fn params(&mut self) -> Result<String> {
        let open = self.expect_sym('(')?;
        let mut depth = 1;
        loop {
            let tok = self.next("')'")?;
            match tok.tok {
                Tok::Sym('(') => depth += 1,
                Tok::Sym(')') => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(self.text[open.end..tok.start].trim().to_string());
                    }
                }
                Tok::Sym(';') => return Err(err(tok.line, tok.column, "unbalanced parentheses")),
                _ => {}
            }
        }
    }
}

/// Parse the supported OpenQASM 2 subset into a DAG.
///
/// Multiple `qreg`/`creg` declarations are flattened in declaration order.
pub fn parse_qasm2_subset(text: &str) -> Result<CircuitDag> {
    let mut p = Parser {
        text,
        tokens: lex(text)?,
        pos: 0,
    };
    let mut qregs: HashMap<String, (u32, u32)> = HashMap::new();
    let mut cregs: HashMap<String, (u32, u32)> = HashMap::new();
    let (mut nq, mut nc) = (0u32, 0u32);
    let mut stmts = Vec::new();

    while let Some(tok) = p.peek().cloned() {
        let Tok::Ident(word) = &tok.tok else {
            return Err(err(tok.line, tok.column, "expected a statement"));
        };
        p.pos += 1;
        match word.as_str() {
            "OPENQASM" => {
                let v = p.next("a version number")?;
                if !matches!(v.tok, Tok::Real | Tok::Int(_)) {
                    return Err(err(v.line, v.column, "expected a version number"));
                }
                if &text[v.start..v.end] != "2.0" && &text[v.start..v.end] != "2" {
                    return Err(err(v.line, v.column, "only OPENQASM 2.0 is supported"));
                }
                p.expect_sym(';')?;
            }
            "include" => {
                let f = p.next("a file name")?;
                if f.tok != Tok::Str {
                    return Err(err(f.line, f.column, "expected a quoted file name"));
                }
                p.expect_sym(';')?;
            }
            "qreg" | "creg" => {
                let (name, ntok) = p.expect_ident("a register name")?;
                p.expect_sym('[')?;
                let size = p.expect_int()?;
                p.expect_sym(']')?;
                p.expect_sym(';')?;
                let size = u32::try_from(size)
                    .map_err(|_| err(ntok.line, ntok.column, "register too large"))?;
                if qregs.contains_key(&name) || cregs.contains_key(&name) {
                    return Err(err(
                        ntok.line,
                        ntok.column,
                        format!("register '{name}' redeclared"),
                    ));
                }
                if word == "qreg" {
                    qregs.insert(name, (nq, size));
                    nq += size;
                } else {
                    cregs.insert(name, (nc, size));
                    nc += size;
                }
            }
            "measure" => {
                let qubit = p.arg()?;
                let arrow = p.next("'->'")?;
                if arrow.tok != Tok::Arrow {
                    return Err(err(arrow.line, arrow.column, "expected '->'"));
                }
                let clbit = p.arg()?;
                p.expect_sym(';')?;
                stmts.push(Stmt::Measure { qubit, clbit });
            }
            "barrier" => {
                let args = p.arg_list()?;
                stmts.push(Stmt::Barrier { args });
            }
            "gate" | "opaque" | "if" => {
                return Err(err(
                    tok.line,
                    tok.column,
                    format!("'{word}' statements are not supported"),
                ));
            }
            _ => {
                let name = word.clone();
                let label = if p.peek().map(|t| &t.tok) == Some(&Tok::Sym('(')) {
                    format!("{name}({})", p.params()?)
                } else {
                    name.clone()
                };
                let args = p.arg_list()?;
                stmts.push(Stmt::Gate {
                    name,
                    label,
                    args,
                    line: tok.line,
                    column: tok.column,
                });
            }
        }
    }

    let resolve = |arg: &Arg, regs: &HashMap<String, (u32, u32)>, kind: &str| -> Result<Vec<u32>> {
        let &(offset, size) = regs.get(&arg.reg).ok_or_else(|| {
            err(
                arg.line,
                arg.column,
                format!("undeclared {kind} register '{}'", arg.reg),
            )
        })?;
        match arg.index {
            Some(i) if i >= size as u64 => Err(err(
                arg.line,
                arg.column,
                format!(
                    "index {i} out of range for register '{}' of size {size}",
                    arg.reg
                ),
            )),
            Some(i) => Ok(vec![offset + i as u32]),
            None => Ok((offset..offset + size).collect()),
        }
    };

    let mut dag = CircuitDag::new(nq as usize, nc as usize);
    for stmt in &stmts {
        match stmt {
            Stmt::Gate {
                name,
                label,
                args,
                line,
                column,
            } => {
                let arity = if ONE_QUBIT.contains(&name.as_str()) {
                    1
                } else if TWO_QUBIT.contains(&name.as_str()) {
                    2
                } else if WIDE.contains(&name.as_str()) {
                    return Err(err(
                        *line,
                        *column,
                        format!("'{name}' acts on more than two qubits; decompose it first"),
                    ));
                } else {
                    args.len()
                };
                if args.len() != arity {
                    return Err(err(
                        *line,
                        *column,
                        format!(
                            "'{name}' takes {arity} qubit(s) but {} were given",
                            args.len()
                        ),
                    ));
                }
                if arity > 2 {
                    return Err(err(
                        *line,
                        *column,
                        format!("gate '{name}' on {arity} qubits is not supported"),
                    ));
                }
                let resolved = args
                    .iter()
                    .map(|a| resolve(a, &qregs, "quantum"))
                    .collect::<Result<Vec<_>>>()?;
                for qubits in broadcast(&resolved, *line, *column)? {
                    dag.push_gate(label.clone(), &qubits)
                        .map_err(|e| err(*line, *column, strip(e)))?;
                }
            }
            Stmt::Measure { qubit, clbit } => {
                let qs = resolve(qubit, &qregs, "quantum")?;
                let cs = resolve(clbit, &cregs, "classical")?;
                if qs.len() != cs.len() {
                    return Err(err(
                        qubit.line,
                        qubit.column,
                        "measure operands differ in size",
                    ));
                }
                for (q, c) in qs.into_iter().zip(cs) {
                    dag.push_measure(q, c)
                        .map_err(|e| err(qubit.line, qubit.column, strip(e)))?;
                }
            }
            Stmt::Barrier { args } => {
                let mut qubits = Vec::new();
                for a in args {
                    qubits.extend(resolve(a, &qregs, "quantum")?);
                }
                qubits.sort_unstable();
                qubits.dedup();
                dag.push_barrier(&qubits)
                    .map_err(|e| err(args[0].line, args[0].column, strip(e)))?;
            }
        }
    }
    Ok(dag)
}

fn strip(e: SabreError) -> String {
    match e {
        SabreError::InvalidCircuit(m) => m,
        other => other.to_string(),
    }
}

/// Expand whole-register operands element-wise; indexed operands repeat.
fn broadcast(resolved: &[Vec<u32>], line: usize, column: usize) -> Result<Vec<Vec<u32>>> {
    let width = resolved
        .iter()
        .map(Vec::len)
        .filter(|&n| n != 1)
        .max()
        .unwrap_or(1);
    if resolved.iter().any(|r| r.len() != 1 && r.len() != width) {
        return Err(err(line, column, "register operands differ in size"));
    }
    Ok((0..width)
        .map(|i| {
            resolved
                .iter()
                .map(|r| if r.len() == 1 { r[0] } else { r[i] })
                .collect()
        })
        .collect())
}

/// Serialize a flat circuit with one `q` and one `c` register.
pub fn dag_to_qasm2(dag: &CircuitDag) -> Result<String> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if dag.num_qubits() > 0 {
        writeln!(out, "qreg q[{}];", dag.num_qubits()).unwrap();
    }
    if dag.num_clbits() > 0 {
        writeln!(out, "creg c[{}];", dag.num_clbits()).unwrap();
    }
    for node in dag.nodes() {
        let qubits = node
            .qubits
            .iter()
            .map(|q| format!("q[{}]", q.0))
            .collect::<Vec<_>>()
            .join(",");
        match node.kind {
            OpKind::ControlFlow => {
                return Err(SabreError::InvalidCircuit(
                    "control flow cannot be written as OpenQASM 2".into(),
                ))
            }
            OpKind::Measure => {
                writeln!(out, "measure {qubits} -> c[{}];", node.clbits[0]).unwrap();
            }
            _ if !node.clbits.is_empty() => {
                return Err(SabreError::InvalidCircuit(format!(
                    "conditional '{}' cannot be written as OpenQASM 2",
                    node.label
                )))
            }
            _ => writeln!(out, "{} {qubits};", node.label).unwrap(),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::NodeId;

    #[test]
    fn single_cx() {
        let dag = parse_qasm2_subset("qreg q[2]; cx q[0],q[1];").unwrap();
        assert_eq!(dag.num_nodes(), 1);
        assert_eq!(dag.node(NodeId(0)).kind, OpKind::TwoQubit);
        assert_eq!(dag.node(NodeId(0)).qubits[1].0, 1);
    }

    #[test]
    fn repeated_gate_is_chained() {
        let dag = parse_qasm2_subset("qreg q[1]; h q[0]; h q[0];").unwrap();
        assert_eq!(dag.predecessors(NodeId(1)), &[NodeId(0)]);
    }

    #[test]
    fn params_kept_in_label() {
        let dag =
            parse_qasm2_subset("qreg q[2];\ncp( pi / 4 ) q[0], q[1];\nrz(-0.5e-3) q[1];").unwrap();
        assert_eq!(dag.node(NodeId(0)).label, "cp(pi / 4)");
        assert_eq!(dag.node(NodeId(1)).label, "rz(-0.5e-3)");
    }

    #[test]
    fn registers_flatten_and_broadcast() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg a[2];\nqreg b[2];\ncreg c[2];\n\
                    h a;\ncx a,b;\nbarrier a[1],b;\nmeasure b -> c;\n";
        let dag = parse_qasm2_subset(text).unwrap();
        assert_eq!(dag.num_qubits(), 4);
        assert_eq!(dag.count_two_qubit(), 2);
        let cx: Vec<_> = dag.nodes().iter().filter(|n| n.is_two_qubit()).collect();
        assert_eq!(
            cx[1].qubits.iter().map(|q| q.0).collect::<Vec<_>>(),
            vec![1, 3]
        );
        let barrier = dag
            .nodes()
            .iter()
            .find(|n| n.kind == OpKind::Barrier)
            .unwrap();
        assert_eq!(barrier.qubits.len(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_qasm2_subset("qreg q[2];\ncx q[0],q[2];").unwrap_err();
        assert!(
            matches!(
                e,
                SabreError::Parse {
                    line: 2,
                    column: 9,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = parse_qasm2_subset("qreg q[2];\n  cx q[0];").unwrap_err();
        assert!(
            matches!(
                e,
                SabreError::Parse {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = parse_qasm2_subset("qreg q[2]\nh q[0];").unwrap_err();
        assert!(
            matches!(
                e,
                SabreError::Parse {
                    line: 2,
                    column: 1,
                    ..
                }
            ),
            "{e:?}"
        );
        let e = parse_qasm2_subset("qreg q[3];\nccx q[0],q[1],q[2];").unwrap_err();
        assert!(matches!(e, SabreError::Parse { line: 2, .. }));
        let e = parse_qasm2_subset("qreg q[1];\nif (c==1) x q[0];").unwrap_err();
        assert!(matches!(
            e,
            SabreError::Parse {
                line: 2,
                column: 1,
                ..
            }
        ));
    }

    #[test]
    fn unknown_gate_takes_written_arity() {
        let dag = parse_qasm2_subset("qreg q[3]; su4 q[0],q[2]; foo q[1];").unwrap();
        assert_eq!(dag.node(NodeId(0)).kind, OpKind::TwoQubit);
        assert_eq!(dag.node(NodeId(1)).kind, OpKind::OneQubit);
        assert!(parse_qasm2_subset("qreg q[3]; foo q[0],q[1],q[2];").is_err());
    }

    #[test]
    fn serializer_round_trips() {
        let text =
            "qreg q[3]; creg c[1]; h q[0]; cp(pi/8) q[0],q[2]; barrier q; measure q[2] -> c[0];";
        let dag = parse_qasm2_subset(text).unwrap();
        let again = parse_qasm2_subset(&dag_to_qasm2(&dag).unwrap()).unwrap();
        assert_eq!(dag, again);
    }
}
