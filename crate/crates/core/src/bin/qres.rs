fn main() {
    std::process::exit(qres::cli::main_with_args(std::env::args_os()));
}
