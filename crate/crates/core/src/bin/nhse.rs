fn main() {
    std::process::exit(nhse::cli::main_with_args(std::env::args_os()));
}
