# exercise: variables
# pattern: typo-in-name
name_var = "Alice"
age_var = 20
print(name_var)
print(ag_var)
