# exercise: return_values
# pattern: undefined-variable
def add(num1, num2):
    total = num1 + num2
    return total

add(2, 6)
print(total)
