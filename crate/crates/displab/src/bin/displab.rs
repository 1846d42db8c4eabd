fn main() {
    std::process::exit(displab::cli::main_with(std::env::args_os()));
}
