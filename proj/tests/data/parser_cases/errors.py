#@ Description: orphan
#@ Helper Object: h
h = 1
#@ Helper Object: h
h = 2
