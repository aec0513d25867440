#@ Constraint: c1
x <= 1
#@ Description: crlf desc

#@ Objective: o
minimize x