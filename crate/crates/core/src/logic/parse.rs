//! S-expression syntax for formulas.

use super::{Formula, Query, Term};
use crate::error::{Error, Result};
use crate::structures::{is_identifier, Vocabulary};

#[derive(Debug)]
enum Sexp {
    Atom(String, usize, usize),
    List(Vec<Sexp>, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom(_, l, c) | Sexp::List(_, l, c) => (*l, *c),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        match self.chars.peek() {
            None => Err(Error::syntax(line, col, "unexpected end of input")),
            Some(')') => Err(Error::syntax(line, col, "unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        None => return Err(Error::syntax(line, col, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, line, col));
                        }
                        _ => items.push(self.sexp()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, line, col))
            }
        }
    }
}

fn term(s: &Sexp) -> Result<Term> {
    match s {
        Sexp::Atom(t, line, col) => {
            if let Some(rest) = t.strip_prefix('c') {
                if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                    let i = rest
                        .parse()
                        .map_err(|_| Error::syntax(*line, *col, "constant index too large"))?;
                    return Ok(Term::Const(i));
                }
            }
            if is_identifier(t) {
                Ok(Term::Var(t.clone()))
            } else {
                Err(Error::syntax(*line, *col, format!("`{t}` is not a term")))
            }
        }
        Sexp::List(_, line, col) => Err(Error::syntax(*line, *col, "expected a term, found a list")),
    }
}

fn variable(s: &Sexp) -> Result<String> {
    match term(s)? {
        Term::Var(v) => Ok(v),
        Term::Const(_) => {
            let (l, c) = s.pos();
            Err(Error::syntax(l, c, "cannot quantify a constant symbol"))
        }
    }
}

fn formula(s: &Sexp) -> Result<Formula> {
    let (items, line, col) = match s {
        Sexp::List(items, l, c) => (items, *l, *c),
        Sexp::Atom(t, l, c) => return Err(Error::syntax(*l, *c, format!("expected a formula, found `{t}`"))),
    };
    let Some(Sexp::Atom(head, ..)) = items.first() else {
        return Err(Error::syntax(line, col, "expected an operator or relation symbol"));
    };
    let args = &items[1..];
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::syntax(
                line,
                col,
                format!("`{head}` takes {n} arguments, found {}", args.len()),
            ))
        }
    };
    Ok(match head.as_str() {
        "exists" | "forall" => {
            arity(2)?;
            let v = variable(&args[0])?;
            let body = Box::new(formula(&args[1])?);
            if head == "exists" {
                Formula::Exists(v, body)
            } else {
                Formula::Forall(v, body)
            }
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(Error::syntax(line, col, format!("`{head}` needs at least one argument")));
            }
            let parts = args.iter().map(formula).collect::<Result<_>>()?;
            if head == "and" {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        "not" => {
            arity(1)?;
            Formula::Not(Box::new(formula(&args[0])?))
        }
        "=" => {
            arity(2)?;
            Formula::Eq(term(&args[0])?, term(&args[1])?)
        }
        rel if is_identifier(rel) => Formula::Atom {
            relation: rel.to_string(),
            args: args.iter().map(term).collect::<Result<_>>()?,
        },
        other => return Err(Error::syntax(line, col, format!("unknown operator `{other}`"))),
    })
}

fn parse_sexp(text: &str, line: usize) -> Result<Sexp> {
    let mut lx = Lexer {
        chars: text.chars().peekable(),
        line,
        col: 1,
    };
    let s = lx.sexp()?;
    lx.skip_ws();
    if lx.chars.peek().is_some() {
        return Err(Error::syntax(lx.line, lx.col, "trailing input after formula"));
    }
    Ok(s)
}

/// Parses one formula and checks it against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let phi = formula(&parse_sexp(text, 1)?)?;
    phi.check_vocabulary(vocab)?;
    Ok(phi)
}

/// Query file: an optional first line `free x y ...` fixing the answer
/// columns, then the formula. Without it the columns are the free
/// variables in sorted order.
pub fn parse_query(text: &str, vocab: &Vocabulary) -> Result<Query> {
    let mut lines: Vec<&str> = text
        .lines()
        .map(|l| {
            let t = l.trim_start();
            if t.starts_with('#') || t.starts_with(';') {
                ""
            } else {
                l
            }
        })
        .collect();
    let mut free = None;
    if let Some(i) = lines.iter().position(|l| !l.trim().is_empty()) {
        let mut toks = lines[i].split_whitespace();
        if toks.next() == Some("free") {
            let vars: Vec<String> = toks.map(String::from).collect();
            if let Some(bad) = vars.iter().find(|v| !is_identifier(v)) {
                return Err(Error::syntax(i + 1, 1, format!("`{bad}` is not a variable")));
            }
            free = Some(vars);
            lines[i] = "";
        }
    }
    let phi = formula(&parse_sexp(&lines.join("\n"), 1)?)?;
    phi.check_vocabulary(vocab)?;
    match free {
        Some(vars) => Query::new(phi, vars),
        None => Ok(Query::from_formula(phi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let v = Vocabulary::graph();
        let phi = parse_formula("(exists x (E x x))", &v).unwrap();
        assert_eq!(phi.to_string(), "(exists x (E x x))");
        let psi = parse_formula("(and (E x y) (= x y))", &v).unwrap();
        assert_eq!(
            psi.free_variables().into_iter().collect::<Vec<_>>(),
            vec!["x", "y"]
        );
    }

    #[test]
    fn reports_errors() {
        let v = Vocabulary::graph();
        assert!(matches!(
            parse_formula("(E x)", &v),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_formula("(F x)", &v),
            Err(Error::UnknownRelation(_))
        ));
        assert!(matches!(
            parse_formula("(E c0 x)", &v),
            Err(Error::UnboundConstant { .. })
        ));
        assert!(matches!(
            parse_formula("(exists x\n  (E x x)", &v),
            Err(Error::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_formula("(E x x) y", &v),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn query_files() {
        let v = Vocabulary::graph();
        let q = parse_query("# adjacency, reversed\nfree y x\n(E x y)\n", &v).unwrap();
        assert_eq!(q.free(), &["y".to_string(), "x".to_string()]);
        let s = parse_query("(exists x (E x x))", &v).unwrap();
        assert_eq!(s.arity(), 0);
        assert!(parse_query("free x\n(E x y)", &v).is_err());
    }
}
