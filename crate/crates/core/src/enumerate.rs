//! Lexicographic walks over cartesian products, with the enumeration cap.

use std::env;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Default bound on candidates a brute-force walk may visit.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "GRDH_ENUM_CAP";

/// Cap from `GRDH_ENUM_CAP`, falling back to the default when unset or unparsable.
pub fn enum_cap_from_env() -> u64 {
    env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub(crate) fn check_cap(size: &BigUint, cap: u64) -> Result<()> {
    if *size > BigUint::from(cap) {
        Err(Error::CapExceeded {
            size: size.clone(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Iterator over `lists[0] × lists[1] × …` in lexicographic order.
#[derive(Debug, Clone)]
pub struct CartesianProduct<T> {
    lists: Vec<Vec<T>>,
    cursor: Vec<usize>,
    done: bool,
}

impl<T: Clone> CartesianProduct<T> {
    pub fn new(lists: Vec<Vec<T>>) -> Self {
        let done = lists.iter().any(Vec::is_empty);
        let cursor = vec![0; lists.len()];
        CartesianProduct {
            lists,
            cursor,
            done,
        }
    }

    /// Number of tuples the walk will yield.
    pub fn len_big(&self) -> BigUint {
        self.lists
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * l.len())
    }
}

impl<T: Clone> Iterator for CartesianProduct<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        let item = self
            .cursor
            .iter()
            .zip(&self.lists)
            .map(|(&i, l)| l[i].clone())
            .collect();
        // odometer, last coordinate fastest
        let mut pos = self.cursor.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.lists[pos].len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(item)
    }
}
