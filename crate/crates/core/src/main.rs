fn main() {
    std::process::exit(tau3_core::cli::main_exit_code());
}
