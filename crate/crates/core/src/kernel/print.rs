use super::Term;

/// Recognizes the normal and eta-short Church numeral shapes `\s z. s^n z`
/// and `\s. s`.
pub fn as_numeral(t: &Term) -> Option<u64> {
    let Term::Lam(s, body) = t else { return None };
    match body.as_ref() {
        Term::Var(v) if v == s => Some(1),
        Term::Lam(z, inner) if z != s => {
            let mut n = 0;
            let mut cur = inner.as_ref();
            loop {
                match cur {
                    Term::Var(v) if v == z => return Some(n),
                    Term::App(f, a) if matches!(f.as_ref(), Term::Var(v) if v == s) => {
                        n += 1;
                        cur = a;
                    }
                    _ => return None,
                }
            }
        }
        _ => None,
    }
}

/// Renders a term in the surface syntax accepted by [`super::parse`]. With
/// `sugar`, Church numerals print as `#n`.
pub fn print(t: &Term, sugar: bool) -> String {
    let mut out = String::new();
    Printer { sugar }.term(t, &mut out);
    out
}

struct Printer {
    sugar: bool,
}

impl Printer {
    fn numeral(&self, t: &Term) -> Option<u64> {
        if self.sugar {
            as_numeral(t)
        } else {
            None
        }
    }

    fn term(&self, t: &Term, out: &mut String) {
        super::with_stack(|| {
            if let Some(n) = self.numeral(t) {
                out.push_str(&format!("#{n}"));
                return;
            }
            match t {
                Term::Lam(..) => {
                    out.push('\\');
                    let mut cur = t;
                    let mut first = true;
                    while let Term::Lam(x, body) = cur {
                        if !first {
                            out.push(' ');
                        }
                        first = false;
                        out.push_str(x);
                        cur = body;
                        if self.numeral(cur).is_some() {
                            break;
                        }
                    }
                    out.push('.');
                    self.term(cur, out);
                }
                Term::App(..) => {
                    let mut spine = Vec::new();
                    let mut head = t;
                    while let Term::App(f, a) = head {
                        spine.push(a.as_ref());
                        head = f;
                    }
                    self.operand(head, out, true);
                    for arg in spine.into_iter().rev() {
                        out.push(' ');
                        self.operand(arg, out, false);
                    }
                }
                Term::Var(x) | Term::Const(x) => out.push_str(x),
            }
        })
    }

    fn operand(&self, t: &Term, out: &mut String, is_head: bool) {
        let atomic = self.numeral(t).is_some()
            || match t {
                Term::Var(_) | Term::Const(_) => true,
                Term::Lam(..) => false,
                Term::App(..) => is_head,
            };
        if atomic {
            self.term(t, out);
        } else {
            out.push('(');
            self.term(t, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{alpha_eq, parse, Env};
    use crate::prelude::church;

    #[test]
    fn print_examples() {
        assert_eq!(print(&Term::lam("x", Term::var("x")), false), r"\x.x");
        assert_eq!(print(&church(0), true), "#0");
        let t = Term::app(Term::var("a"), Term::app(Term::var("b"), Term::var("c")));
        assert_eq!(print(&t, false), "a (b c)");
    }

    #[test]
    fn nested_binders_merge() {
        let env = Env::prelude();
        let t = parse(r"\x. \y. (\z. z) x y", &env).unwrap();
        assert_eq!(print(&t, false), r"\x y.(\z.z) x y");
    }

    #[test]
    fn sugar_inside_terms() {
        let t = Term::lam(
            "z",
            Term::apps(Term::var("z"), [church(0), church(1), church(2)]),
        );
        assert_eq!(print(&t, true), r"\z.z #0 #1 #2");
        assert_eq!(print(&Term::lam("x", church(3)), true), r"\x.#3");
        assert_eq!(print(&Term::lam("s", Term::var("s")), true), "#1");
        assert_eq!(
            as_numeral(&Term::lam("s", Term::lam("s", Term::var("s")))),
            None
        );
    }

    #[test]
    fn lambda_arguments_are_parenthesized() {
        let env = Env::prelude();
        let src = r"f (\x.x) (\y.y)";
        let t = parse(src, &env).unwrap();
        assert_eq!(print(&t, false), src);
        assert!(alpha_eq(&parse(&print(&t, false), &env).unwrap(), &t));
    }
}
