fn main() {
    std::process::exit(dyncut::cli::main_with(std::env::args_os()));
}
