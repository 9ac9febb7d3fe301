//! Symbol context shared by every algebraic value.
//!
//! A context declares the coordinate dimension `n` and the parameter symbols.
//! Internally each coordinate `x_i` is represented through its surd variable
//! `t_i` with `x_i = t_i^2`, so half-integer powers of coordinates stay inside
//! ordinary polynomial rings. Variable order is fixed: surd variables first
//! (by coordinate index), then parameters in declaration order. The monomial
//! order everywhere is graded lexicographic over that variable sequence.

use std::fmt;
use std::sync::Arc;

use crate::error::CoreError;

#[derive(Debug, PartialEq, Eq)]
pub struct Context {
    coords: usize,
    params: Vec<String>,
}

impl Context {
    pub fn new(coords: usize, params: &[&str]) -> Arc<Self> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        for (i, p) in params.iter().enumerate() {
            assert!(
                !params[..i].contains(p),
                "duplicate parameter symbol `{p}`"
            );
            assert!(
                !is_reserved(p, coords),
                "parameter symbol `{p}` collides with a built-in name"
            );
        }
        Arc::new(Context { coords, params })
    }

    pub fn coords(&self) -> usize {
        self.coords
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn nvars(&self) -> usize {
        self.coords + self.params.len()
    }

    /// Index of the surd variable t_i for coordinate i (1-based coordinate).
    pub fn coord_var(&self, i: usize) -> Result<usize, CoreError> {
        if i == 0 || i > self.coords {
            return Err(CoreError::IndexOutOfRange {
                index: i,
                dimension: self.coords,
            });
        }
        Ok(i - 1)
    }

    pub fn is_coord_var(&self, var: usize) -> bool {
        var < self.coords
    }

    pub fn param_var(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name).map(|k| self.coords + k)
    }

    pub fn var_is_param(&self, var: usize) -> bool {
        var >= self.coords && var < self.nvars()
    }

    pub fn param_name(&self, var: usize) -> Option<&str> {
        var.checked_sub(self.coords).and_then(|k| self.params.get(k)).map(|s| s.as_str())
    }

    /// New context with extra parameters appended after the existing ones.
    pub fn extended(self: &Arc<Self>, extra: &[&str]) -> Arc<Self> {
        let mut params: Vec<String> = self.params.clone();
        for e in extra {
            assert!(
                !params.iter().any(|p| p == e),
                "parameter symbol `{e}` already declared"
            );
            params.push(e.to_string());
        }
        Arc::new(Context {
            coords: self.coords,
            params,
        })
    }

    pub fn same(a: &Arc<Context>, b: &Arc<Context>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

fn is_reserved(name: &str, coords: usize) -> bool {
    let digits_of = |prefix: char| -> Option<usize> {
        let rest = name.strip_prefix(prefix)?;
        rest.parse::<usize>().ok()
    };
    if name == "sqrt" {
        return true;
    }
    for prefix in ['x', 'p'] {
        if let Some(i) = digits_of(prefix) {
            if i >= 1 && i <= coords {
                return true;
            }
        }
    }
    if let Some(rest) = name.strip_prefix('d') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            let ok = rest
                .chars()
                .all(|c| c.to_digit(10).map(|d| d >= 1 && d as usize <= coords).unwrap_or(false));
            if ok {
                return true;
            }
        }
    }
    false
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {}; params", self.coords)?;
        for p in &self.params {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_layout() {
        let ctx = Context::new(2, &["b1", "b2", "E"]);
        assert_eq!(ctx.nvars(), 5);
        assert_eq!(ctx.coord_var(1).unwrap(), 0);
        assert_eq!(ctx.coord_var(2).unwrap(), 1);
        assert!(ctx.coord_var(3).is_err());
        assert_eq!(ctx.param_var("b2"), Some(3));
        assert_eq!(ctx.param_name(4), Some("E"));
        assert!(ctx.is_coord_var(1));
        assert!(!ctx.is_coord_var(2));
    }

    #[test]
    #[should_panic(expected = "collides")]
    fn reserved_names_rejected() {
        let _ = Context::new(2, &["p1"]);
    }

    #[test]
    fn extension_preserves_order() {
        let ctx = Context::new(1, &["a"]);
        let ext = ctx.extended(&["alpha"]);
        assert_eq!(ext.param_var("a"), Some(1));
        assert_eq!(ext.param_var("alpha"), Some(2));
    }
}
