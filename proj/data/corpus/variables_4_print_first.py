# exercise: variables
# pattern: use-before-assignment
print(name_var)
name_var = "Alice"
age_var = 20
print(age_var)
