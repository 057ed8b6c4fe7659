fn main() {
    std::process::exit(cocycle_lab::main_with_args(std::env::args_os()));
}
