import numpy as np

#@ Model: Edge Cases
#@ Description: first part
#@ Description:   second part  
  #@   Interface   Object :  feastol  
feastol = 1e-8
#@Widget: w
#@ no colon here
x = "#@ Constraint: not_me"
#@ Constraint:
#@ Description: dropped
#@ Variable: P
#@ Description: power
#@ Description: output
P = variable(3)
#@ Output Object: out
