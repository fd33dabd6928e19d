fn main() { std::process::exit(eqsim::cli::main()); }
