//! Selftest harness.
