#include <iostream>
#include <iterator>
#include <string>
#include <algorithm>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string input;
  const std::string* stdin_doc = nullptr;
  // stdin is read only when some file argument is "-".
  if (std::find(args.begin(), args.end(), "-") != args.end()) {
    input.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    stdin_doc = &input;
  }
  std::string out, err;
  const int code = dyadcert::cli::Run(args, stdin_doc, out, err);
  std::cout << out;
  std::cerr << err;
  return code;
}
