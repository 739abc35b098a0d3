pub mod exterior;
