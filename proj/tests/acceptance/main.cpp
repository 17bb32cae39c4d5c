#include <iostream>
int main(int argc, char** argv) {
  std::cout << "acceptance placeholder\n";
  return 0;
}
