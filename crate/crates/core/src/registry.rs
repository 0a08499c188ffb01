//! Name-keyed registry of interchangeable strategies.

use crate::error::{BouncerError, Result};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, fn() -> Box<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Register `make` under `name`, replacing any earlier entry.
    pub fn register(&mut self, name: &'static str, make: fn() -> Box<T>) -> &mut Self {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, make));
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn create(&self, name: &str) -> Result<Box<T>> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, make)| make())
            .ok_or_else(|| BouncerError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter {
        fn greet(&self) -> &'static str;
    }
    struct Hi;
    impl Greeter for Hi {
        fn greet(&self) -> &'static str {
            "hi"
        }
    }
    struct Yo;
    impl Greeter for Yo {
        fn greet(&self) -> &'static str {
            "yo"
        }
    }

    #[test]
    fn selects_by_name_and_reports_unknown() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter");
        reg.register("hi", || Box::new(Hi)).register("yo", || Box::new(Yo));
        assert_eq!(reg.create("YO").unwrap().greet(), "yo");
        assert_eq!(reg.names(), vec!["hi", "yo"]);
        let err = reg.create("hey").err().unwrap();
        assert!(err.to_string().contains("hi, yo"));
        reg.register("hi", || Box::new(Yo));
        assert_eq!(reg.create("hi").unwrap().greet(), "yo");
    }
}
