# exercise: variables
# pattern: unquoted-string
name_var = Alice
age_var = 20
print(name_var)
print(age_var)
