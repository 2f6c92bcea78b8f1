# x1 XOR x2 on four wires: wire 2 ends as (x1 OR x2) AND (~x1 OR ~x2)
ccv1
vars 2
wires x1 x2 ~x1 ~x2
gate 1 2
gate 3 4
gate 2 4
output 2
