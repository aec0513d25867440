#@ Constraint: P_limits
#@ Description: Generator active power limits
P_limits = []
for gen in network.generators:
    P_limits.extend([P[gen.index] >= gen.P_min, P[gen.index] <= gen.P_max])

#@ Objective: gen_cost_obj
gen_cost_obj = optmod.minimize(gen_cost)

#@ Problem: problem
problem = optmod.Problem(gen_cost_obj,
                         constraints=power_balance+angle_ref+P_limits)

#@ Solver: solver
solver = optalg.opt_solver.OptSolverINLP()
solver.set_parameters({'feastol': feastol, 'maxiter': 100})

#@ Execution: info
info = problem.solve(solver)

#@ Output Object: output_obj
output_obj = list(info.values())

