//! Interned names for symbols, momentum slots and Lorentz indices.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

fn interner() -> &'static Mutex<HashSet<Arc<str>>> {
    static POOL: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
    POOL.get_or_init(|| Mutex::new(HashSet::new()))
}

fn intern(name: &str) -> Arc<str> {
    let mut pool = interner().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(existing) = pool.get(name) {
        return existing.clone();
    }
    let fresh: Arc<str> = Arc::from(name);
    pool.insert(fresh.clone());
    fresh
}

/// Compare names so that embedded digit runs sort numerically (`A2 < A10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    loop {
        match (x.first(), y.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(c), Some(d)) if c.is_ascii_digit() && d.is_ascii_digit() => {
                let n = x.iter().take_while(|c| c.is_ascii_digit()).count();
                let m = y.iter().take_while(|c| c.is_ascii_digit()).count();
                let (dx, dy) = (&x[..n], &y[..m]);
                let tx = dx.iter().skip_while(|&&c| c == b'0').count();
                let ty = dy.iter().skip_while(|&&c| c == b'0').count();
                let ord = tx.cmp(&ty).then_with(|| dx[n - tx..].cmp(&dy[m - ty..]));
                if ord != Ordering::Equal {
                    return ord;
                }
                x = &x[n..];
                y = &y[m..];
            }
            (Some(c), Some(d)) => {
                if c != d {
                    return c.cmp(d);
                }
                x = &x[1..];
                y = &y[1..];
            }
        }
    }
}

macro_rules! interned_name {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Self {
                $name(intern(name))
            }

            pub fn name(&self) -> &str {
                &self.0
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
            }
        }

        impl Eq for $name {}

        impl Hash for $name {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.0.hash(state)
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                natural_cmp(&self.0, &other.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

interned_name!(
    /// A commuting scalar symbol: Schwinger parameters, masses, couplings.
    Symbol
);
interned_name!(
    /// A momentum four-vector slot such as `xi1` or `q`.
    Slot
);
interned_name!(
    /// A Lorentz index label such as `mu3`.
    IndexName
);

/// Name of the imaginary unit; polynomials reduce `i^2 = -1`.
pub const IMAGINARY_UNIT: &str = "i";

impl Symbol {
    pub fn imaginary_unit() -> Self {
        Symbol::new(IMAGINARY_UNIT)
    }

    pub fn is_imaginary_unit(&self) -> bool {
        &*self.0 == IMAGINARY_UNIT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order_compares_digit_runs_numerically() {
        assert!(Symbol::new("A2") < Symbol::new("A10"));
        assert!(Symbol::new("A1") < Symbol::new("A2"));
        assert!(Symbol::new("A") < Symbol::new("A1"));
        assert!(Symbol::new("mW") > Symbol::new("m3"));
        assert_eq!(natural_cmp("x01", "x1"), Ordering::Less);
    }

    #[test]
    fn interning_is_thread_safe() {
        let handles: Vec<_> = (0..8)
            .map(|t| {
                std::thread::spawn(move || {
                    (0..200).map(|k| Symbol::new(&format!("s{}", (k * 7 + t) % 50))).collect::<Vec<_>>()
                })
            })
            .collect();
        let all: Vec<Vec<Symbol>> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (t, syms) in all.iter().enumerate() {
            for (k, s) in syms.iter().enumerate() {
                assert_eq!(s, &Symbol::new(&format!("s{}", (k * 7 + t) % 50)));
            }
        }
    }
}
