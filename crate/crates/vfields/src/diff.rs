use scalarlin::expr::{Expr, Func};
use scalarlin::rat;

fn is_zero(e: &Expr) -> bool {
    e.as_num().is_some_and(|r| *r == rat(0, 1))
}

/// Partial derivative of `e` with respect to the variable `var`. Every
/// other variable is a constant.
pub fn derivative(e: &Expr, var: &str) -> Expr {
    match e {
        Expr::Num(_) | Expr::Pi => Expr::int(0),
        Expr::Var(n) => Expr::int(i64::from(n == var)),
        Expr::Neg(a) => -derivative(a, var),
        Expr::Add(a, b) => derivative(a, var) + derivative(b, var),
        Expr::Sub(a, b) => derivative(a, var) - derivative(b, var),
        Expr::Mul(a, b) => {
            derivative(a, var) * (**b).clone() + (**a).clone() * derivative(b, var)
        }
        Expr::Div(a, b) => {
            let (da, db) = (derivative(a, var), derivative(b, var));
            if is_zero(&db) {
                da / (**b).clone()
            } else {
                (da * (**b).clone() - (**a).clone() * db) / Expr::pow((**b).clone(), 2)
            }
        }
        Expr::Pow(a, k) => Expr::int((*k).into()) * Expr::pow((**a).clone(), k - 1) * derivative(a, var),
        Expr::Call(f, a) => {
            let inner = derivative(a, var);
            if is_zero(&inner) {
                return Expr::int(0);
            }
            outer(*f, (**a).clone()) * inner
        }
    }
}

/// `f'(a)` written in the same grammar.
fn outer(f: Func, a: Expr) -> Expr {
    let call = |g| Expr::call(g, a.clone());
    let one = || Expr::int(1);
    match f {
        Func::Sin => call(Func::Cos),
        Func::Cos => -call(Func::Sin),
        Func::Tan => one() + Expr::pow(call(Func::Tan), 2),
        Func::Cot => -(one() + Expr::pow(call(Func::Cot), 2)),
        Func::Sinh => call(Func::Cosh),
        Func::Cosh => call(Func::Sinh),
        Func::Tanh => one() - Expr::pow(call(Func::Tanh), 2),
        Func::Coth => one() - Expr::pow(call(Func::Coth), 2),
        Func::Exp => call(Func::Exp),
        Func::Sqrt => one() / (Expr::int(2) * call(Func::Sqrt)),
        Func::Abs => call(Func::Sign),
        Func::Sign => Expr::int(0),
        Func::Atan => one() / (one() + Expr::pow(a, 2)),
    }
}
