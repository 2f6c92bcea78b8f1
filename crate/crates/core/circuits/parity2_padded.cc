# x1 XOR x2 on four wires and four gates; the last gate never touches the output wire
ccv1
vars 2
wires x1 x2 ~x1 ~x2
gate 1 2
gate 3 4
gate 2 4
gate 1 3
output 2
