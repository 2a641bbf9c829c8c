# exercise: return_values
# pattern: bare-function-reference
def add(num1, num2):
    return num1 + num2
result = add # Forgot to call the function with parentheses and arguments
print(result)
