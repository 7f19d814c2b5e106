fn main() {
    std::process::exit(minvf_cli::main_entry(std::env::args_os()));
}
